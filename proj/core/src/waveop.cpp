#include "beamlab/waveop.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include "beamlab/dispersive.hpp"
#include "beamlab/mmatrix.hpp"
#include "beamlab/quadrature.hpp"

namespace beamlab {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);
const cplx kPrefactor = 2.0 / (kPi * I); // W = I - kPrefactor * integral

enum class Variable { ThetaPlus, Mu, ThetaTilde };

struct Band {
    std::string name;
    Variable var;
    double lo, hi;
    std::vector<double> breakpoints;
};

/// Per-node factors: A = R0^s(rows, supp) v M_s^{-1} v and the row of
/// (R0^+ - R0^-) mu^3 / a1, i.e. (i/2) cos(thetaPlus |l - m|).
class Integrand {
public:
    Integrand(const Potential& V, Side side, double cap) : V_(V), side_(side), cap_(cap) {
        support_ = V.support();
        v_ = V.sqrtAbs();
    }

    struct Node {
        PhaseData p;
        double weight = 1.0;
        Eigen::MatrixXcd vMv; // diag(v) M^{-1} diag(v)
        double condition = 0.0;
    };

    Node node(Variable var, double x) const {
        Node n;
        switch (var) {
        case Variable::ThetaPlus: n.p = phaseDataFromThetaPlus(x); break;
        case Variable::ThetaTilde: n.p = phaseDataFromThetaTilde(x); break;
        case Variable::Mu:
            n.p = phaseData(x);
            n.weight = n.p.a1;
            break;
        }
        const MMatrix M = buildM(V_, n.p, side_);
        const MInverse Mi = invertM(M, cap_);
        n.condition = Mi.conditionNumber;
        n.vMv = v_.asDiagonal() * Mi.inverse * v_.asDiagonal();
        return n;
    }

    /// R0^s(n - k) for n in rows, k in supp.
    Eigen::MatrixXcd resolventRows(const Node& n, const LatticeWindow& rows) const {
        Eigen::MatrixXcd R(rows.size(), Eigen::Index(support_.size()));
        for (long r = -rows.radius(); r <= rows.radius(); ++r)
            for (std::size_t k = 0; k < support_.size(); ++k)
                R(rows.offset(r), Eigen::Index(k)) = freeResolventKernel(n.p, side_, r - support_[k]);
        return R;
    }

    /// (i/2) cos(thetaPlus |l - m|) for l in supp, m in cols.
    Eigen::MatrixXcd jump(const Node& n, const LatticeWindow& cols) const {
        Eigen::MatrixXcd C(Eigen::Index(support_.size()), cols.size());
        for (std::size_t k = 0; k < support_.size(); ++k)
            for (long m = -cols.radius(); m <= cols.radius(); ++m)
                C(Eigen::Index(k), cols.offset(m)) = 0.5 * I * std::cos(n.p.thetaPlus * double(support_[k] - m));
        return C;
    }

private:
    const Potential& V_;
    Side side_;
    double cap_;
    std::vector<long> support_;
    Eigen::VectorXd v_;
};

double thetaOfMu(double mu) { return -2.0 * std::asin(0.5 * mu); }
double thetaTildeOfGap(double x) { return -4.0 * std::asin(0.5 * std::sqrt(x)); } // mu = 2 - x

std::vector<Band> bands(const QuadratureConfig& cfg, double muMin) {
    std::vector<Band> b;
    const int L = cfg.gradingLevels;
    if (cfg.substituteLow) {
        const double lo = thetaOfMu(cfg.mu0), hi = thetaOfMu(muMin);
        b.push_back({"low (thetaPlus)", Variable::ThetaPlus, lo, hi, gradedBreakpoints(lo, hi, true, L)});
    } else {
        b.push_back({"low (mu)", Variable::Mu, muMin, cfg.mu0, gradedBreakpoints(muMin, cfg.mu0, false, L)});
    }
    std::vector<double> mid;
    for (int i = 0; i <= cfg.midPanels; ++i) mid.push_back(cfg.mu0 + (2.0 - 2.0 * cfg.mu0) * i / cfg.midPanels);
    b.push_back({"mid (mu)", Variable::Mu, cfg.mu0, 2.0 - cfg.mu0, mid});
    if (cfg.substituteHigh) {
        // The cut sits at the same substitution-variable distance as the low band.
        const double lo = thetaTildeOfGap(cfg.mu0), hi = thetaOfMu(muMin);
        b.push_back({"high (thetaTilde)", Variable::ThetaTilde, lo, hi, gradedBreakpoints(lo, hi, true, L)});
    } else {
        b.push_back({"high (mu)", Variable::Mu, 2.0 - cfg.mu0, 2.0 - muMin,
                     gradedBreakpoints(2.0 - cfg.mu0, 2.0 - muMin, true, L)});
    }
    return b;
}

struct Plan {
    double muMin;
    Classification zero, sixteen;
};

Plan plan(const Potential& V, const QuadratureConfig& cfg) {
    validate(cfg);
    if (V.isZero()) throw Error(ErrorCode::DegeneratePotential, "wave operator needs a nonzero potential");
    Plan p;
    p.zero = classify(V, Threshold::Zero).classification;
    p.sixteen = classify(V, Threshold::Sixteen).classification;
    p.muMin = cfg.muMin;
    if (p.zero != Classification::Regular || p.sixteen != Classification::Regular)
        p.muMin = std::max(cfg.muMin, cfg.resonantMuMin);
    return p;
}

/// Integrates body(node, out) over all bands; out has the given dimension.
Eigen::VectorXcd integrateBands(const Potential& V, const QuadratureConfig& cfg, Side side, Eigen::Index dim,
                                const std::function<void(const Integrand::Node&, Eigen::VectorXcd&)>& body,
                                WaveDiagnostics& diag) {
    const Plan pl = plan(V, cfg);
    diag = WaveDiagnostics{};
    diag.muMinUsed = pl.muMin;
    diag.zeroClass = pl.zero;
    diag.sixteenClass = pl.sixteen;
    const Integrand integrand(V, side, cfg.conditionCap);

    Eigen::VectorXcd total = Eigen::VectorXcd::Zero(dim);
    for (const Band& band : bands(cfg, pl.muMin)) {
        BandDiagnostics bd;
        bd.name = band.name;
        bd.lo = band.lo;
        bd.hi = band.hi;
        std::mutex m;
        AdaptiveOptions opt;
        opt.absTol = cfg.absTol;
        opt.maxIntervals = cfg.maxIntervals;
        const auto r = integrateAdaptive(
            [&](double x, Eigen::VectorXcd& out) {
                const auto node = integrand.node(band.var, x);
                body(node, out);
                out *= node.weight;
                std::lock_guard<std::mutex> g(m);
                bd.maxCondition = std::max(bd.maxCondition, node.condition);
            },
            dim, band.breakpoints, opt);
        bd.errorEstimate = r.errorEstimate;
        bd.evaluations = r.evaluations;
        bd.intervals = r.intervals;
        diag.bands.push_back(bd);
        if (!r.converged)
            throw Error(ErrorCode::QuadratureFailure, "band " + band.name + " error estimate " +
                                                          std::to_string(r.errorEstimate) + " exceeds tolerance");
        total += r.value;
    }

    // Omitted endpoint pieces: integrand size at the cut times the cut length.
    Eigen::VectorXcd out(dim);
    for (auto [var, x, len] : {std::tuple{Variable::ThetaPlus, thetaOfMu(pl.muMin), std::abs(thetaOfMu(pl.muMin))},
                               std::tuple{Variable::ThetaTilde, thetaOfMu(pl.muMin), std::abs(thetaOfMu(pl.muMin))}}) {
        out.setZero();
        const auto node = integrand.node(var, x);
        body(node, out);
        diag.endpointTail += std::abs(kPrefactor) * len * (dim > 0 ? out.cwiseAbs().maxCoeff() : 0.0);
    }
    return total;
}

} // namespace

void validate(const QuadratureConfig& cfg) {
    if (!(cfg.mu0 > 0.0 && cfg.mu0 < 1.0)) throw Error(ErrorCode::InvalidArgument, "mu0 must lie in (0, 1)");
    if (!(cfg.muMin > 0.0 && cfg.muMin < cfg.mu0) || !(cfg.resonantMuMin > 0.0 && cfg.resonantMuMin < cfg.mu0))
        throw Error(ErrorCode::InvalidArgument, "muMin must lie in (0, mu0)");
    if (!(cfg.absTol > 0.0)) throw Error(ErrorCode::InvalidArgument, "absTol must be positive");
    if (cfg.gradingLevels < 0 || cfg.midPanels < 1 || cfg.maxIntervals < 1)
        throw Error(ErrorCode::InvalidArgument, "panel counts must be positive");
}

double WaveDiagnostics::totalError() const {
    double e = endpointTail;
    for (const auto& b : bands) e += std::abs(kPrefactor) * b.errorEstimate;
    return e;
}

WaveOperatorKernel stationaryWaveOperator(const Potential& V, const LatticeWindow& w, const QuadratureConfig& cfg,
                                          Side side) {
    WaveOperatorKernel K;
    K.side = side;
    const Integrand helper(V, side, cfg.conditionCap);
    const Eigen::Index n = w.size();
    const Eigen::VectorXcd integral = integrateBands(
        V, cfg, side, n * n,
        [&](const Integrand::Node& node, Eigen::VectorXcd& out) {
            Eigen::Map<Eigen::MatrixXcd> M(out.data(), n, n);
            M.noalias() = helper.resolventRows(node, w) * node.vMv * helper.jump(node, w);
        },
        K.diagnostics);
    Eigen::MatrixXcd W = -kPrefactor * Eigen::Map<const Eigen::MatrixXcd>(integral.data(), n, n);
    W.diagonal().array() += 1.0;
    K.kernel = ComplexKernel(w, w, W);
    return K;
}

ComplexSequence applyWaveOperator(const Potential& V, const ComplexSequence& f, const LatticeWindow& rows,
                                  const QuadratureConfig& cfg, Side side, WaveDiagnostics* diagnostics) {
    const Integrand helper(V, side, cfg.conditionCap);
    WaveDiagnostics diag;
    const Eigen::VectorXcd integral = integrateBands(
        V, cfg, side, rows.size(),
        [&](const Integrand::Node& node, Eigen::VectorXcd& out) {
            out.noalias() = helper.resolventRows(node, rows) * (node.vMv * (helper.jump(node, f.window) * f.values));
        },
        diag);
    if (diagnostics) *diagnostics = diag;
    ComplexSequence r(rows, -kPrefactor * integral);
    for (long n = -rows.radius(); n <= rows.radius(); ++n) r[n] += f.at(n);
    return r;
}

ComplexSequence applyWaveOperatorAdjoint(const Potential& V, const ComplexSequence& g, const LatticeWindow& cols,
                                         const QuadratureConfig& cfg, Side side, WaveDiagnostics* diagnostics) {
    const Integrand helper(V, side, cfg.conditionCap);
    WaveDiagnostics diag;
    // W^* = I - conj(prefactor) int C^H (vMv)^H R^H
    const Eigen::VectorXcd integral = integrateBands(
        V, cfg, side, cols.size(),
        [&](const Integrand::Node& node, Eigen::VectorXcd& out) {
            const Eigen::VectorXcd y = helper.resolventRows(node, g.window).adjoint() * g.values;
            out.noalias() = helper.jump(node, cols).adjoint() * (node.vMv.adjoint() * y);
        },
        diag);
    if (diagnostics) *diagnostics = diag;
    ComplexSequence r(cols, -std::conj(kPrefactor) * integral);
    for (long m = -cols.radius(); m <= cols.radius(); ++m) r[m] += g.at(m);
    return r;
}

IntertwiningResult intertwiningCheck(const Potential& V, double t, const LatticeWindow& window,
                                     const QuadratureConfig& cfg, const IntertwiningOptions& opt) {
    if (opt.adjointRadius < window.radius()) throw Error(ErrorCode::InvalidArgument, "adjoint window too small");
    const ComplexSequence d0 = delta(LatticeWindow(0));
    const ComplexSequence y = applyWaveOperatorAdjoint(V, d0, LatticeWindow(opt.adjointRadius), cfg);
    const long spread = long(std::ceil(kBiLaplacianMaxSpeed * std::abs(t))) + 64;
    const ComplexSequence z = t == 0.0 ? y : freePropagate(y, t, LatticeWindow(opt.adjointRadius + spread));
    const ComplexSequence wz = applyWaveOperator(V, z, window, cfg);

    IntertwiningResult r;
    r.truncationRadius = std::max(window.radius(), opt.adjointRadius) + spread + 128;
    const TruncatedSpectrum spec = truncatedSpectrum(V, LatticeWindow(r.truncationRadius));
    const AcSelection sel = selectAc(spec, V, opt.ac);
    r.droppedValues = sel.droppedValues;
    const ComplexSequence ref = spectralApply(spec, sel, [t](double l) { return std::exp(-I * t * l); }, d0, window);
    r.discrepancy = (ref.values - wz.values).norm();
    r.reference = ref.values.norm();
    return r;
}

GrowthTable endpointGrowthExperiment(const Potential& V, const std::vector<long>& Ns, long probeOffset,
                                     const QuadratureConfig& cfg) {
    if (Ns.size() < 3) throw Error(ErrorCode::InvalidArgument, "growth fit needs at least three sizes");
    GrowthTable tab;
    tab.probeOffset = probeOffset;
    std::vector<double> x, y;
    for (long N : Ns) {
        if (N < 1) throw Error(ErrorCode::InvalidArgument, "N must be positive");
        const LatticeWindow rows(16 * N + 64 + std::labs(probeOffset));
        const ComplexSequence f = charFn(N);
        const ComplexSequence wf = applyWaveOperator(V, f, rows, cfg);
        GrowthRow row;
        row.N = N;
        row.supNorm = wf.values.cwiseAbs().maxCoeff();
        row.valueAtProbe = wf.at(N + probeOffset);
        row.l2Ratio = wf.values.norm() / f.values.norm();
        tab.rows.push_back(row);
        x.push_back(std::log(double(N)));
        y.push_back(row.supNorm);
    }
    tab.fit = linearFit(x, y);
    return tab;
}

cplx harmonicReference(long N) {
    if (N < 0) throw Error(ErrorCode::InvalidArgument, "N must be non-negative");
    double h = 0.0, alt = 0.0;
    for (long k = 2; k <= 2 * N + 2; ++k) {
        h += 1.0 / double(k);
        alt += (k % 2 == 0 ? 1.0 : -1.0) / double(k);
    }
    return (I - 1.0) / 4.0 * h + 0.5 * alt;
}

} // namespace beamlab
