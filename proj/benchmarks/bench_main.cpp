#include <benchmark/benchmark.h>

#include "beamlab/dispersive.hpp"
#include "beamlab/mmatrix.hpp"
#include "beamlab/singular.hpp"
#include "beamlab/threshold.hpp"
#include "beamlab/waveop.hpp"

using namespace beamlab;

namespace {

Potential v1() { return Potential({{-2, -1.0}, {-1, 4.0}, {0, -3.0}, {1, 4.0}, {2, -1.0}}); }

void BM_FreeResolventMatrix(benchmark::State& state) {
    const LatticeWindow w(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(freeResolventMatrix(0.7, Side::Plus, w, w));
    state.SetComplexityN(w.size());
}
BENCHMARK(BM_FreeResolventMatrix)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_ClassifyZero(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(classify(v1(), Threshold::Zero));
}
BENCHMARK(BM_ClassifyZero);

void BM_BlowupProbe(benchmark::State& state) {
    const auto grid = defaultProbeGrid(0.1);
    for (auto _ : state) benchmark::DoNotOptimize(blowupProbe(v1(), Threshold::Zero, grid));
}
BENCHMARK(BM_BlowupProbe)->Unit(benchmark::kMillisecond);

void BM_PerturbedResolvent(benchmark::State& state) {
    const LatticeWindow w(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(perturbedResolventKernel(v1(), 1.0, Side::Plus, w));
}
BENCHMARK(BM_PerturbedResolvent)->Arg(32)->Arg(128)->Arg(512);

void BM_StationaryWaveOperator(benchmark::State& state) {
    const LatticeWindow w(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(stationaryWaveOperator(Potential::delta(), w));
}
BENCHMARK(BM_StationaryWaveOperator)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_FreeBeamKernelQuadrature(benchmark::State& state) {
    const double t = double(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(freeBeamKernel(1.0, t, 0));
}
BENCHMARK(BM_FreeBeamKernelQuadrature)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_FreeBeamKernelFFT(benchmark::State& state) {
    const double t = double(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(freeBeamKernelFFT(1.0, t, long(3 * t)));
}
BENCHMARK(BM_FreeBeamKernelFFT)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_LanczosNorm(benchmark::State& state) {
    const auto K = czKernelMatrix(CZKernelId::KTilde1, LatticeWindow(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(lpNormEstimate(K, 2.0));
}
BENCHMARK(BM_LanczosNorm)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

} // namespace

int main(int argc, char** argv) {
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
