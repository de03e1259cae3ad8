#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <limits>

#include "beamlab/dispersive.hpp"
#include "beamlab/mmatrix.hpp"
#include "beamlab/singular.hpp"
#include "beamlab/waveop.hpp"
#include "output.hpp"

namespace cli {

using nlohmann::json;
using namespace beamlab;

namespace {

json configJson(const RunConfig& c) {
    return {{"potential", c.potential}, {"window", c.window},     {"tol", c.tol},       {"mu0", c.mu0},
            {"quadTol", c.quadTol},     {"out", c.out},           {"seed", c.seed},     {"workers", c.workers},
            {"threshold", c.threshold}, {"side", c.side},         {"kind", c.kind},     {"kernel", c.kernel},
            {"Ns", c.Ns},               {"p", c.ps},              {"offset", c.offset}, {"a", c.a},
            {"tmin", c.tmin},           {"tmax", c.tmax},         {"points", c.points}, {"probes", c.probes},
            {"perturbed", c.perturbed}};
}

std::filesystem::path outDir(const RunConfig& c) {
    std::filesystem::path p(c.out);
    std::filesystem::create_directories(p);
    return p;
}

Potential loadPotential(const RunConfig& c) {
    if (c.potential.empty()) throw Error(ErrorCode::InvalidArgument, "--potential is required");
    return Potential::fromFile(c.potential);
}

Threshold parseThreshold(const std::string& s) {
    if (s == "zero") return Threshold::Zero;
    if (s == "sixteen") return Threshold::Sixteen;
    throw Error(ErrorCode::InvalidArgument, "threshold must be zero or sixteen");
}

QuadratureConfig quadrature(const RunConfig& c) {
    QuadratureConfig q;
    q.mu0 = c.mu0;
    q.absTol = c.quadTol;
    return q;
}

json decisionsJson(const std::vector<NullSpaceDecision>& ds) {
    json arr = json::array();
    for (const auto& d : ds)
        arr.push_back({{"stage", d.stage},
                       {"singularValues", d.singularValues},
                       {"scale", d.scale},
                       {"tolerance", d.tolerance},
                       {"dimension", d.dimension},
                       {"nullity", d.nullity},
                       {"margin", d.margin}});
    return arr;
}

} // namespace

int cmdClassify(const RunConfig& c) {
    const Potential V = loadPotential(c);
    ChainOptions opt;
    opt.tol = c.tol;
    const Threshold th = parseThreshold(c.threshold);
    const ResonanceReport r = classify(V, th, opt);
    json singular = json::array();
    for (const auto& d : r.decisions) singular.push_back(d.singularValues);
    json res = {{"threshold", thresholdName(r.threshold)},
                {"classification", classificationName(r.classification)},
                {"nullTolerance", r.nullTolerance},
                {"singularValues", singular},
                {"decisions", decisionsJson(r.decisions)},
                {"warnings", r.warnings},
                {"residuals",
                 {{"sup", r.residualSup}, {"orthogonality", r.orthogonalityResidual}, {"recovery", r.recoveryResidual}}}};
    json phi = json::array();
    if (r.phi) {
        for (long n = -r.phi->window.radius(); n <= r.phi->window.radius(); ++n)
            phi.push_back({{"n", n}, {"re", (*r.phi)[n].real()}, {"im", (*r.phi)[n].imag()}});
    }
    res["phi"] = phi;
    writeSummary(outDir(c), std::string("classify_") + thresholdName(th) + ".json", "classify", configJson(c), res);
    return 0;
}

int cmdWaveop(const RunConfig& c) {
    const Potential V = loadPotential(c);
    if (c.side != "plus" && c.side != "minus") throw Error(ErrorCode::InvalidArgument, "side must be plus or minus");
    const Side side = c.side == "plus" ? Side::Plus : Side::Minus;
    const LatticeWindow w(c.window);
    const WaveOperatorKernel K = stationaryWaveOperator(V, w, quadrature(c), side);
    const auto dir = outDir(c);
    Csv csv(dir / "waveop_kernel.csv", {"n", "m", "re", "im"});
    for (long n = -w.radius(); n <= w.radius(); ++n)
        for (long m = -w.radius(); m <= w.radius(); ++m) {
            csv << n << m << K.kernel(n, m).real() << K.kernel(n, m).imag();
            csv.endRow();
        }
    json bands = json::array();
    for (const auto& b : K.diagnostics.bands)
        bands.push_back({{"name", b.name},
                         {"lo", b.lo},
                         {"hi", b.hi},
                         {"errorEstimate", b.errorEstimate},
                         {"evaluations", b.evaluations},
                         {"intervals", b.intervals},
                         {"maxCondition", b.maxCondition}});
    const Eigen::VectorXd colNorms = K.kernel.entries.colwise().norm();
    json res = {{"side", sideName(side)},
                {"bands", bands},
                {"muMinUsed", K.diagnostics.muMinUsed},
                {"endpointTail", K.diagnostics.endpointTail},
                {"totalError", K.diagnostics.totalError()},
                {"zeroClassification", classificationName(K.diagnostics.zeroClass)},
                {"sixteenClassification", classificationName(K.diagnostics.sixteenClass)},
                {"W00", toJson(K.kernel(0, 0))},
                {"columnNormMin", colNorms.minCoeff()},
                {"columnNormMax", colNorms.maxCoeff()}};
    writeSummary(dir, "waveop.json", "waveop", configJson(c), res);
    return 0;
}

int cmdGrowth(const RunConfig& c) {
    const Potential V = loadPotential(c);
    const std::vector<long> Ns = c.Ns.empty() ? std::vector<long>{8, 16, 32, 64, 128} : c.Ns;
    const GrowthTable t = endpointGrowthExperiment(V, Ns, c.offset, quadrature(c));
    const auto dir = outDir(c);
    Csv csv(dir / "growth.csv", {"N", "supNorm", "probeRe", "probeIm", "l2Ratio"});
    json rows = json::array();
    for (const auto& r : t.rows) {
        csv << r.N << r.supNorm << r.valueAtProbe.real() << r.valueAtProbe.imag() << r.l2Ratio;
        csv.endRow();
        rows.push_back({{"N", r.N}, {"supNorm", r.supNorm}, {"valueAtProbe", toJson(r.valueAtProbe)}, {"l2Ratio", r.l2Ratio}});
    }
    json res = {{"rows", rows}, {"fit", toJson(t.fit)}, {"probeOffset", t.probeOffset},
                {"harmonicReferenceN1", toJson(harmonicReference(1))}};
    writeSummary(dir, "growth.json", "growth", configJson(c), res);
    return 0;
}

int cmdDecay(const RunConfig& c) {
    const std::vector<double> grid = logGrid(c.tmin, c.tmax, c.points);
    DecayFit f;
    if (c.perturbed)
        f = perturbedDecayFit(loadPotential(c), c.a, grid);
    else
        f = decayFit(c.a, grid);
    const auto dir = outDir(c);
    Csv csv(dir / "decay.csv", {"t", "supnorm"});
    for (std::size_t i = 0; i < f.times.size(); ++i) {
        csv << f.times[i] << f.supNorms[i];
        csv.endRow();
    }
    json res = {{"fit", toJson(f.fit)}, {"exponent", f.fit.slope}, {"perturbed", c.perturbed}};
    if (c.a != 0.0) {
        const StationaryAnalysis s = stationaryAnalysis(c.a, 0.0);
        res["stationary"] = {{"x0", s.x0}, {"theta0", s.theta0}, {"s0", s.s0}, {"hAtX0", s.hAtX0}};
    }
    writeSummary(dir, "decay.json", "decay", configJson(c), res);
    return 0;
}

int cmdProbe(const RunConfig& c) {
    const Potential V = loadPotential(c);
    const auto grid = defaultProbeGrid(c.mu0);
    const auto dir = outDir(c);
    std::vector<ProbeSample> samples;
    LinearFit fit;
    std::string what;
    if (c.kind == "blowup") {
        const auto r = blowupProbe(V, parseThreshold(c.threshold), grid);
        samples = r.samples;
        fit = r.fit;
        what = std::string("blowup-") + thresholdName(r.threshold);
    } else {
        CancellationTarget t;
        if (c.kind == "vQ") t = CancellationTarget::vQ;
        else if (c.kind == "vS0") t = CancellationTarget::vS0;
        else if (c.kind == "vS1") t = CancellationTarget::vS1;
        else if (c.kind == "vS2") t = CancellationTarget::vS2;
        else if (c.kind == "sixteen-vQt") t = CancellationTarget::SixteenVQt;
        else throw Error(ErrorCode::InvalidArgument, "unknown probe kind " + c.kind);
        ChainOptions opt;
        opt.tol = c.tol;
        const auto r = cancellationOrderProbe(V, t, grid, opt);
        samples = r.samples;
        fit = r.fit;
        what = cancellationName(t);
    }
    Csv csv(dir / "probe.csv", {"distance", "mu", "norm"});
    for (const auto& s : samples) {
        csv << s.distance << s.mu << s.norm;
        csv.endRow();
    }
    int nearSingular = 0;
    for (const auto& s : samples) nearSingular += s.nearSingular ? 1 : 0;
    json res = {{"probe", what}, {"slope", fit.slope}, {"intercept", fit.intercept},
                {"correlation", fit.correlation}, {"points", fit.points}, {"nearSingularSamples", nearSingular}};
    writeSummary(dir, "probe.json", "probe", configJson(c), res);
    return 0;
}

int cmdCz(const RunConfig& c) {
    static const std::vector<std::pair<std::string, CZKernelId>> ids = {
        {"k1+", CZKernelId::K1Plus},       {"k1-", CZKernelId::K1Minus},      {"k2+", CZKernelId::K2Plus},
        {"k2-", CZKernelId::K2Minus},      {"kt1", CZKernelId::KTilde1},      {"kt2+", CZKernelId::KTilde2Plus},
        {"kt2-", CZKernelId::KTilde2Minus}, {"schur-probe", CZKernelId::SchurProbe}};
    CZKernelId id{};
    bool found = false;
    for (const auto& [name, k] : ids)
        if (name == c.kernel) id = k, found = true;
    if (!found) throw Error(ErrorCode::InvalidArgument, "unknown kernel " + c.kernel);
    const std::vector<long> Ns = c.Ns.empty() ? std::vector<long>{128, 256, 512} : c.Ns;
    const std::vector<std::string> ps = c.ps.empty() ? std::vector<std::string>{"1", "2", "inf"} : c.ps;
    const auto dir = outDir(c);
    Csv csv(dir / "cz.csv", {"N", "p", "estimate", "lowerBoundOnly"});
    json rows = json::array();
    for (long N : Ns) {
        const ComplexKernel K = czKernelMatrix(id, LatticeWindow(N));
        const SchurResult s = schurTest(K, std::numeric_limits<double>::infinity());
        for (const auto& p : ps) {
            const double pv = p == "inf" ? std::numeric_limits<double>::infinity() : std::stod(p);
            const NormEstimate e = lpNormEstimate(K, pv, c.probes, c.seed);
            csv << N << p << e.estimate << std::string(e.lowerBoundOnly ? "1" : "0");
            csv.endRow();
            rows.push_back({{"N", N}, {"p", p}, {"estimate", e.estimate}, {"lowerBoundOnly", e.lowerBoundOnly},
                            {"schurRowSup", s.rowSup}, {"schurColSup", s.colSup}});
        }
    }
    json res = {{"kernel", czKernelName(id)}, {"rows", rows}};
    if (id == CZKernelId::K1Plus || id == CZKernelId::K1Minus || id == CZKernelId::K2Plus || id == CZKernelId::K2Minus)
        res["reflectionResidual"] = reflectionIdentityCheck(id, LatticeWindow(std::max<long>(16, c.window)));
    writeSummary(dir, "cz.json", "cz", configJson(c), res);
    return 0;
}

} // namespace cli
