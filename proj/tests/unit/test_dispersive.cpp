#include <doctest.h>

#include <cmath>
#include <numbers>

#include "beamlab/dispersive.hpp"
#include "beamlab/quadrature.hpp"
#include "oracles.hpp"

using namespace beamlab;

namespace {

double symbolRoot(double a, double th) {
    const double m = 2.0 - 2.0 * std::cos(th);
    return std::sqrt(m * m + a * a);
}

} // namespace

TEST_CASE("phase derivatives match finite differences") {
    for (double a : {0.0, 0.5, 1.0, 5.0})
        for (double s : {0.0, 0.7}) {
            const BeamPhase ph{a, s};
            for (double th : {-2.9, -1.7, -0.8, -0.3}) {
                CHECK(ph.value(th) == doctest::Approx(symbolRoot(a, th) - s * th));
                auto f = [&](double x) { return ph.value(x); };
                for (int k = 1; k <= 4; ++k) {
                    const double fd = oracle::derivative(f, th, k);
                    CHECK(ph.derivative(th, k) == doctest::Approx(fd).epsilon(1e-4).scale(1.0));
                }
            }
        }
}

TEST_CASE("degenerate point at the origin") {
    for (double a : {0.5, 1.0, 5.0}) {
        const BeamPhase ph{a, 0.0};
        CHECK(std::abs(ph.derivative(0.0, 2)) < 1e-14);
        // The phase is even in theta, so the third derivative vanishes too and the
        // fourth, 12 / a, controls the decay.
        CHECK(std::abs(ph.derivative(0.0, 3)) < 1e-12);
        CHECK(ph.derivative(0.0, 4) == doctest::Approx(12.0 / a));
    }
}

TEST_CASE("kernel at time zero is the identity and its size is bounded") {
    CHECK(std::abs(freeBeamKernel(1.0, 0.0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(freeBeamKernel(1.0, 0.0, 3)) < 1e-12);
    for (double t : {0.5, 7.0, 60.0})
        for (long d : {0L, 4L, 40L}) CHECK(std::abs(freeBeamKernel(0.7, t, d)) <= 1.0 + 1e-12);
    CHECK(freeBeamKernel(2.0, 13.0, 5) == freeBeamKernel(2.0, 13.0, -5));
}

TEST_CASE("a = 0 kernel has Bessel magnitude") {
    for (double t : {3.0, 25.0, 500.0})
        for (long d : {0L, 1L, 17L, 400L}) {
            const double ref = std::abs(std::cyl_bessel_j(double(d), 2.0 * t));
            CHECK(std::abs(std::abs(freeBeamKernel(0.0, t, d)) - ref) < 1e-8);
        }
}

TEST_CASE("quadrature, FFT and trapezoid agree") {
    for (double a : {0.0, 1.0, 5.0}) {
        const double t = 40.0;
        const auto fft = freeBeamKernelFFT(a, t, 150);
        for (long d : {0L, 9L, 60L, 130L}) {
            const cplx q = freeBeamKernel(a, t, d);
            const cplx tr = oracle::fourierCoefficient(
                [&](double th) { return std::exp(cplx(0.0, -t * symbolRoot(a, th))); }, d, 8192);
            CHECK(std::abs(q - tr) < 1e-8);
            CHECK(std::abs(fft[std::size_t(d + 150)] - tr) < 1e-10);
        }
    }
}

TEST_CASE("free propagation against a dense eigendecomposition") {
    const double t = 3.0;
    ComplexSequence f{LatticeWindow(10)};
    for (long n = -10; n <= 10; ++n) f[n] = cplx(std::exp(-0.2 * n * n), 0.1 * n);
    const LatticeWindow out(30);
    const auto g = freePropagate(f, t, out);
    // The dense window is wide enough that the Dirichlet walls are out of reach.
    const long big = 400;
    const Eigen::MatrixXcd U = oracle::denseBiLaplacePropagator(big, t);
    Eigen::VectorXcd fb = Eigen::VectorXcd::Zero(2 * big + 1);
    for (long n = -10; n <= 10; ++n) fb[n + big] = f[n];
    const Eigen::VectorXcd gb = U * fb;
    for (long n = -30; n <= 30; ++n) CHECK(std::abs(g[n] - gb[n + big]) < 1e-9);
    // Unitarity on a window large enough to hold the wave.
    const auto all = freePropagate(f, t, LatticeWindow(200));
    CHECK(all.values.norm() == doctest::Approx(f.values.norm()).epsilon(1e-10));
}

TEST_CASE("decay exponent for a = 0") {
    const auto f = decayFit(0.0, logGrid(1e2, 1e4, 9));
    CHECK(f.times.size() == 9);
    CHECK(std::abs(f.fit.slope + 1.0 / 3.0) < 0.03);
    CHECK_THROWS_AS(decayFit(0.0, logGrid(1e2, 1e3, 9)), Error);
    CHECK_THROWS_AS(decayFit(0.0, logGrid(1e2, 1e4, 5)), Error);
}

TEST_CASE("cubic root by bisection and the stationary structure") {
    for (double a : {0.5, 1.0, 5.0}) {
        CHECK(cubicH(a, -1.0) == doctest::Approx(-a * a - 16.0));
        CHECK(cubicH(a, 0.0) == doctest::Approx(a * a));
        const double x0 = cubicRootX0(a);
        const long double ref = oracle::bisect([&](long double x) {
            return 4 * x * x * x - 8 * x * x + (2.0L * a * a + 4) * x + (long double)(a) * a;
        }, -1.0L, 0.0L);
        CHECK(std::abs(x0 - double(ref)) < 1e-12);
        CHECK(std::abs(cubicH(a, x0)) < 1e-12);
        const auto s = stationaryAnalysis(a, 0.0);
        CHECK(s.hasTheta0);
        CHECK(s.theta0 > -std::numbers::pi);
        CHECK(s.theta0 < -std::numbers::pi / 2);
        CHECK(s.theta0 == doctest::Approx(-std::acos(x0)));
        // Phi'' vanishes at theta0.
        CHECK(std::abs(BeamPhase{a, 0.0}.derivative(s.theta0, 2)) < 1e-10);
        const double c = std::cos(s.theta0), sn = std::sin(s.theta0);
        const double m = 2.0 - 2.0 * c;
        CHECK(s.s0 == doctest::Approx(4.0 * (1.0 - c) * sn / std::sqrt(m * m + a * a)));
    }
    CHECK_THROWS_AS(cubicRootX0(0.0), Error);
    const auto roots = cubicRealRoots(0.0);
    REQUIRE(roots.size() == 2);
    CHECK(std::abs(roots[0]) < 1e-12);
    CHECK(std::abs(roots[1] - 1.0) < 1e-12);
    for (double x = -1.0; x <= 1.0; x += 0.25) CHECK(cubicH(0.0, x) == doctest::Approx(4 * x * (x - 1) * (x - 1)));
}

TEST_CASE("perturbed propagators") {
    const LatticeWindow w(8);
    // t = 0 gives P_ac for both kernels.
    const auto p0 = perturbedPropagators(Potential::delta(), 1.0, 0.0, w);
    CHECK((p0.cosKernel.entries - p0.sincKernel.entries).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((p0.cosKernel.entries - p0.cosKernel.entries.transpose()).cwiseAbs().maxCoeff() < 1e-12);

    // V = 0, a = 0: cos = (K(t) + K(-t)) / 2 from the free kernel.
    const double t = 6.0;
    const auto p = perturbedPropagators(Potential(), 0.0, t, w);
    double worst = 0.0;
    for (long n = -8; n <= 8; ++n) {
        const cplx c = 0.5 * (freeBeamKernel(0.0, t, n) + freeBeamKernel(0.0, -t, n));
        worst = std::max(worst, std::abs(p.cosKernel(n, 0) - c));
    }
    CHECK(worst < 1e-6);

    // sinc(t) is the average of cos(s) over s in [-t, t].
    const double T = 10.0;
    const Potential V = Potential::delta();
    const LatticeWindow big(w.radius() + 2 * 22 + 64);
    const auto spec = truncatedSpectrum(V, big);
    const auto sinc = perturbedPropagators(V, 1.0, T, w, {}, &spec).sincKernel;
    std::vector<double> nodes, weights;
    gaussLegendre(64, -T, T, nodes, weights);
    Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(w.size(), w.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        avg += weights[i] * perturbedPropagators(V, 1.0, nodes[i], w, {}, &spec).cosKernel.entries;
    avg /= 2.0 * T;
    CHECK((avg - sinc.entries).cwiseAbs().maxCoeff() < 1e-4);
}
