#include "beamlab/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace beamlab {

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kRatio = 2.0 * kSqrt2 - 3.0;

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd kernelOnSupport(ThresholdKernelId id, const std::vector<long>& idx) {
    const Eigen::Index s = Eigen::Index(idx.size());
    MatrixXd G(s, s);
    for (Eigen::Index a = 0; a < s; ++a)
        for (Eigen::Index b = 0; b < s; ++b) G(a, b) = thresholdKernelValue(id, std::labs(idx[a] - idx[b]));
    return G;
}

MatrixXd sandwich(const VectorXd& w, const MatrixXd& G) { return w.asDiagonal() * G * w.asDiagonal(); }

double spectralNorm(const MatrixXd& A) {
    if (A.size() == 0) return 0.0;
    Eigen::JacobiSVD<MatrixXd> svd(A);
    return svd.singularValues()(0);
}

/// Orthonormal basis of the range of an orthogonal projection.
MatrixXd rangeBasis(const MatrixXd& proj) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(proj);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < proj.rows(); ++i)
        if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
    MatrixXd B(proj.rows(), Eigen::Index(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) B.col(Eigen::Index(j)) = es.eigenvectors().col(keep[j]);
    return B;
}

/// Kernel of basis^T A basis, returned as an orthonormal basis in supp-v
/// coordinates; records the decision and rejects gray-band singular values.
MatrixXd nullBasis(const MatrixXd& A, const MatrixXd& basis, double refNorm, const std::string& stage,
                   const ChainOptions& opt, std::vector<NullSpaceDecision>& log) {
    NullSpaceDecision d;
    d.stage = stage;
    d.tolerance = opt.tol;
    d.dimension = int(basis.cols());
    if (basis.cols() == 0) {
        d.margin = std::numeric_limits<double>::infinity();
        log.push_back(d);
        return MatrixXd(A.rows(), 0);
    }
    MatrixXd R = basis.transpose() * A * basis;
    R = 0.5 * (R + R.transpose());
    Eigen::JacobiSVD<MatrixXd> svd(R, Eigen::ComputeFullV);
    const VectorXd& sv = svd.singularValues();
    d.scale = std::max(sv(0), refNorm);
    if (d.scale == 0.0) d.scale = 1.0;
    d.singularValues.assign(sv.data(), sv.data() + sv.size());
    d.margin = std::numeric_limits<double>::infinity();
    std::vector<Eigen::Index> nullCols;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        double rel = sv(i) / d.scale;
        if (rel < opt.tol) {
            nullCols.push_back(i);
            d.margin = std::min(d.margin, rel > 0 ? std::log10(opt.tol / rel) : 16.0);
        } else if (rel < opt.grayFactor * opt.tol) {
            log.push_back(d);
            throw Error(ErrorCode::IllConditioned,
                        stage + ": relative singular value " + std::to_string(rel) + " inside the gray band");
        } else {
            d.margin = std::min(d.margin, std::log10(rel / (opt.grayFactor * opt.tol)));
        }
    }
    d.nullity = int(nullCols.size());
    log.push_back(d);
    MatrixXd N(A.rows(), Eigen::Index(nullCols.size()));
    for (std::size_t j = 0; j < nullCols.size(); ++j) N.col(Eigen::Index(j)) = basis * svd.matrixV().col(nullCols[j]);
    return N;
}

MatrixXd projector(const MatrixXd& basis, Eigen::Index s) {
    if (basis.cols() == 0) return MatrixXd::Zero(s, s);
    return basis * basis.transpose();
}

/// Inverse of A + S on the range of `basis`, extended by zero.
MatrixXd inverseOn(const MatrixXd& A, const MatrixXd& basis) {
    const Eigen::Index s = A.rows();
    if (basis.cols() == 0) return MatrixXd::Zero(s, s);
    MatrixXd R = basis.transpose() * A * basis;
    return basis * R.inverse() * basis.transpose();
}

void requireCompact(const Potential& V) {
    if (V.background() != 0.0)
        throw Error(ErrorCode::InvalidArgument, "threshold analysis needs a finitely supported potential");
    if (V.isZero() || V.l1Norm() == 0.0) throw Error(ErrorCode::DegeneratePotential, "potential has zero l1 norm");
}

} // namespace

const char* kernelName(ThresholdKernelId id) noexcept {
    switch (id) {
    case ThresholdKernelId::Gm1: return "G-1";
    case ThresholdKernelId::G0: return "G0";
    case ThresholdKernelId::G1: return "G1";
    case ThresholdKernelId::G3: return "G3";
    case ThresholdKernelId::Gt0: return "Gt0";
    case ThresholdKernelId::Gt1: return "Gt1";
    case ThresholdKernelId::Gt2: return "Gt2";
    }
    return "?";
}

const char* thresholdName(Threshold t) noexcept { return t == Threshold::Zero ? "zero" : "sixteen"; }

const char* classificationName(Classification c) noexcept {
    switch (c) {
    case Classification::Regular: return "Regular";
    case Classification::FirstKindResonance: return "FirstKindResonance";
    case Classification::SecondKindResonance: return "SecondKindResonance";
    case Classification::Resonance: return "Resonance";
    case Classification::Eigenvalue: return "Eigenvalue";
    }
    return "?";
}

double thresholdKernelValue(ThresholdKernelId id, long dist) noexcept {
    const double d = double(std::labs(dist));
    const double d2 = d * d;
    switch (id) {
    case ThresholdKernelId::Gm1: return 0.125 - 0.5 * d2;
    case ThresholdKernelId::G0: return (d2 * d - d) / 12.0;
    case ThresholdKernelId::G1: return d2 * d2 / 3.0 - 5.0 * d2 / 6.0 + 3.0 / 16.0;
    case ThresholdKernelId::G3: return d2 * d2 * d2 - 35.0 * d2 * d2 / 4.0 + 259.0 * d2 / 16.0 - 225.0 / 64.0;
    case ThresholdKernelId::Gt0: return (2.0 * kSqrt2 * d - std::pow(kRatio, d)) / (32.0 * kSqrt2);
    case ThresholdKernelId::Gt1: return 2.0 * d2 - 13.0 / 8.0;
    case ThresholdKernelId::Gt2:
        return -d2 * d / 24.0 + 5.0 * d / 48.0
               - std::pow(kRatio, d) * (kSqrt2 * d / 2.0 - 0.125 + 15.0 / (256.0 * kSqrt2));
    }
    return 0.0;
}

ComplexKernel thresholdKernel(ThresholdKernelId id, const LatticeWindow& w) {
    ComplexKernel K(w, w);
    for (long n = -w.radius(); n <= w.radius(); ++n)
        for (long m = -w.radius(); m <= w.radius(); ++m) K(n, m) = thresholdKernelValue(id, n - m);
    return K;
}

double checkFundamentalSolution(ThresholdKernelId id, const LatticeWindow& w) {
    if (id != ThresholdKernelId::G0 && id != ThresholdKernelId::Gt0)
        throw Error(ErrorCode::InvalidArgument, std::string(kernelName(id)) + " is not a fundamental solution");
    if (w.radius() < 8) throw Error(ErrorCode::InvalidArgument, "window radius must be at least 8");
    const bool sixteen = id == ThresholdKernelId::Gt0;
    auto K = [&](long n, long m) {
        double g = thresholdKernelValue(id, n - m);
        return (sixteen && ((n + m) % 2 != 0)) ? -g : g;
    };
    double worst = 0.0;
    const long N = w.radius() - 2;
    for (long n = -N; n <= N; ++n) {
        for (long m = -N; m <= N; ++m) {
            double r = K(n + 2, m) - 4.0 * K(n + 1, m) + 6.0 * K(n, m) - 4.0 * K(n - 1, m) + K(n - 2, m);
            if (sixteen) r -= 16.0 * K(n, m);
            if (n == m) r -= 1.0;
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

ProjectionChainZero buildZeroChain(const Potential& V, const ChainOptions& opt) {
    requireCompact(V);
    ProjectionChainZero c;
    c.support = V.support();
    c.v = V.sqrtAbs();
    c.U = V.signs();
    c.l1 = V.l1Norm();
    const Eigen::Index s = c.v.size();
    const MatrixXd I = MatrixXd::Identity(s, s);

    c.vGm1v = sandwich(c.v, kernelOnSupport(ThresholdKernelId::Gm1, c.support));
    c.vG0v = sandwich(c.v, kernelOnSupport(ThresholdKernelId::G0, c.support));
    c.vG1v = sandwich(c.v, kernelOnSupport(ThresholdKernelId::G1, c.support));
    c.vG3v = sandwich(c.v, kernelOnSupport(ThresholdKernelId::G3, c.support));

    c.P = c.v * c.v.transpose() / c.l1;
    c.Q = I - c.P;
    c.basisQ = rangeBasis(c.Q);
    c.T = MatrixXd(c.U.asDiagonal()) + c.vG0v;

    c.basisS0 = nullBasis(c.vGm1v, c.basisQ, spectralNorm(c.vGm1v), "S0 = ker QvG(-1)vQ on Q", opt, c.decisions);
    c.S0 = projector(c.basisS0, s);
    c.D0 = inverseOn(c.vGm1v + c.S0, c.basisQ);

    c.T0 = c.S0 * c.T * c.S0;
    c.basisS1 = nullBasis(c.T, c.basisS0, spectralNorm(c.T), "S1 = ker T0 on S0", opt, c.decisions);
    c.S1 = projector(c.basisS1, s);

    const MatrixXd inner1 = c.vG1v + (8.0 / c.l1) * c.vGm1v * c.P * c.vGm1v + 64.0 * c.T * c.D0 * c.T;
    c.T1 = c.S1 * inner1 * c.S1;
    c.basisS2 = nullBasis(inner1, c.basisS1, spectralNorm(inner1), "S2 = ker T1 on S1", opt, c.decisions);
    c.S2 = projector(c.basisS2, s);
    c.D2 = inverseOn(inner1 + c.S2, c.basisS1);

    const double f6 = 720.0;
    const MatrixXd left = c.T * c.vGm1v * c.D0 - (c.l1 / 8.0) * c.vG1v * c.D0 * c.T * c.D0;
    const MatrixXd right = c.D0 * c.vGm1v * c.T - (c.l1 / 8.0) * c.D0 * c.T * c.D0 * c.vG1v;
    const MatrixXd inner2 =
        (c.vG3v - (8.0 * f6 / c.l1) * c.T * c.T - (f6 / 64.0) * c.vG1v * c.D0 * c.vG1v) / f6
        + (64.0 / (c.l1 * c.l1)) * left * c.D2 * right;
    c.T2 = c.S2 * inner2 * c.S2;
    c.basisS3 = nullBasis(inner2, c.basisS2, spectralNorm(inner2), "S3 = ker T2 on S2", opt, c.decisions);
    c.S3 = projector(c.basisS3, s);
    return c;
}

ProjectionChainSixteen buildSixteenChain(const Potential& V, const ChainOptions& opt) {
    requireCompact(V);
    ProjectionChainSixteen c;
    c.support = V.support();
    c.vt = V.alternatingSqrtAbs();
    c.U = V.signs();
    c.l1 = V.l1Norm();
    const Eigen::Index s = c.vt.size();
    const MatrixXd I = MatrixXd::Identity(s, s);

    c.vGt0v = sandwich(c.vt, kernelOnSupport(ThresholdKernelId::Gt0, c.support));
    c.vGt1v = sandwich(c.vt, kernelOnSupport(ThresholdKernelId::Gt1, c.support));
    c.vGt2v = sandwich(c.vt, kernelOnSupport(ThresholdKernelId::Gt2, c.support));

    c.Pt = c.vt * c.vt.transpose() / c.l1;
    c.Qt = I - c.Pt;
    c.basisQt = rangeBasis(c.Qt);
    c.Tt = MatrixXd(c.U.asDiagonal()) + c.vGt0v;

    c.Tt0 = c.Qt * c.Tt * c.Qt;
    c.basisSt0 = nullBasis(c.Tt, c.basisQt, spectralNorm(c.Tt), "St0 = ker QtTtQt on Qt", opt, c.decisions);
    c.St0 = projector(c.basisSt0, s);

    const MatrixXd inner1 = c.vGt1v + (32.0 / c.l1) * c.Tt * c.Tt;
    c.Tt1 = c.St0 * inner1 * c.St0;
    c.basisSt1 = nullBasis(inner1, c.basisSt0, spectralNorm(inner1), "St1 = ker Tt1 on St0", opt, c.decisions);
    c.St1 = projector(c.basisSt1, s);

    c.Tt2 = c.St1 * c.vGt2v * c.St1;
    c.basisSt2 = nullBasis(c.vGt2v, c.basisSt1, spectralNorm(c.vGt2v), "St2 = ker Tt2 on St1", opt, c.decisions);
    c.St2 = projector(c.basisSt2, s);
    return c;
}

LatticeWindow reportWindow(const Potential& V) { return LatticeWindow(V.supportRadius() + 64); }

namespace {

/// Sum_k K(n - x_k) w_k over the support for every n of the window.
ComplexSequence supportConvolution(ThresholdKernelId id, const std::vector<long>& idx, const VectorXd& w,
                                   const LatticeWindow& win) {
    ComplexSequence out(win);
    for (long n = -win.radius(); n <= win.radius(); ++n) {
        double acc = 0.0;
        for (std::size_t k = 0; k < idx.size(); ++k) acc += thresholdKernelValue(id, n - idx[k]) * w[Eigen::Index(k)];
        out[n] = acc;
    }
    return out;
}

void finishRecovery(ResonanceReport& r, const Potential& V, ComplexSequence phi, const VectorXd& U,
                    const VectorXd& v, const std::vector<long>& idx, double lambda) {
    // The recovered phi must reproduce f = U v phi on supp v.
    double mismatch = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto i = Eigen::Index(k);
        mismatch = std::max(mismatch, std::abs(r.f[i] - U[i] * v[i] * phi.at(idx[k])));
    }
    r.recoveryResidual = mismatch;
    Eigen::Index argmax = 0;
    phi.values.cwiseAbs().maxCoeff(&argmax);
    phi.values /= phi.values[argmax];
    ComplexSequence h = applyH(V, phi);
    double res = 0.0;
    for (long n = -phi.window.radius() + 2; n <= phi.window.radius() - 2; ++n)
        res = std::max(res, std::abs(h[n] - lambda * phi[n]));
    r.residualSup = res;
    r.phi = std::move(phi);
}

} // namespace

ResonanceReport classify(const Potential& V, Threshold threshold, const ChainOptions& opt) {
    ResonanceReport r;
    r.threshold = threshold;
    r.nullTolerance = opt.tol;
    const LatticeWindow win = reportWindow(V);

    if (threshold == Threshold::Zero) {
        ProjectionChainZero c = buildZeroChain(V, opt);
        r.decisions = c.decisions;
        const MatrixXd* basis = nullptr;
        if (c.basisS1.cols() == 0) {
            r.classification = Classification::Regular;
        } else if (c.basisS2.cols() == 0) {
            r.classification = Classification::FirstKindResonance;
            basis = &c.basisS1;
        } else if (c.basisS3.cols() == 0) {
            r.classification = Classification::SecondKindResonance;
            basis = &c.basisS2;
        } else {
            r.classification = Classification::Eigenvalue;
            r.warnings.push_back("S3 is nonzero: zero is an eigenvalue");
            basis = &c.basisS3;
        }
        if (!basis) return r;

        r.f = basis->col(0);
        const VectorXd& f = r.f;
        const VectorXd vf = c.v.cwiseProduct(f);
        ComplexSequence phi = supportConvolution(ThresholdKernelId::G0, c.support, vf, win);
        phi.values = -phi.values;
        const VectorXd Tf = c.T * f;

        // Orthogonality constraints characterizing the recovered space.
        const int kmax = r.classification == Classification::FirstKindResonance ? 1
                         : r.classification == Classification::SecondKindResonance ? 2
                                                                                    : 3;
        double orth = 0.0;
        for (int k = 0; k <= kmax; ++k) orth = std::max(orth, std::abs(f.dot(V.moment(k))));
        if (r.classification == Classification::FirstKindResonance) orth = std::max(orth, (c.S0 * Tf).norm());
        else if (r.classification == Classification::SecondKindResonance) orth = std::max(orth, (c.Q * Tf).norm());
        else orth = std::max(orth, Tf.norm());
        r.orthogonalityResidual = orth;

        if (r.classification == Classification::SecondKindResonance) {
            const double c0 = Tf.dot(c.v) / c.l1;
            phi.values.array() += c0;
        } else if (r.classification == Classification::FirstKindResonance) {
            const VectorXd v1 = V.moment(1);
            const double v1v = v1.dot(c.v);
            const VectorXd vp = v1 - (v1v / c.l1) * c.v;
            const double c1 = Tf.dot(vp) / vp.squaredNorm();
            const double c2 = Tf.dot(c.v) / c.l1 - v1v * c1 / c.l1;
            for (long n = -win.radius(); n <= win.radius(); ++n) phi[n] += c1 * double(n) + c2;
        }
        finishRecovery(r, V, std::move(phi), c.U, c.v, c.support, 0.0);
        return r;
    }

    ProjectionChainSixteen c = buildSixteenChain(V, opt);
    r.decisions = c.decisions;
    const MatrixXd* basis = nullptr;
    if (c.basisSt0.cols() == 0) {
        r.classification = Classification::Regular;
    } else if (c.basisSt1.cols() == 0) {
        r.classification = Classification::Resonance;
        basis = &c.basisSt0;
    } else {
        r.classification = Classification::Eigenvalue;
        basis = &c.basisSt1;
    }
    if (c.basisSt2.cols() != 0) r.warnings.push_back("St2 is nonzero");
    if (!basis) return r;

    r.f = basis->col(0);
    const VectorXd& f = r.f;
    const VectorXd Ttf = c.Tt * f;
    double orth = std::abs(f.dot(c.vt));
    if (r.classification == Classification::Resonance) {
        orth = std::max(orth, (c.Qt * Ttf).norm());
    } else {
        orth = std::max(orth, std::abs(f.dot(V.alternatingMoment(1))));
        orth = std::max(orth, (c.Tt0 * f).norm());
    }
    r.orthogonalityResidual = orth;

    ComplexSequence phi = supportConvolution(ThresholdKernelId::Gt0, c.support, c.vt.cwiseProduct(f), win);
    phi.values = -phi.values;
    if (r.classification == Classification::Resonance) phi.values.array() += Ttf.dot(c.vt) / c.l1;
    phi = parityJ(phi);
    finishRecovery(r, V, std::move(phi), c.U, V.sqrtAbs(), c.support, 16.0);
    return r;
}

} // namespace beamlab
