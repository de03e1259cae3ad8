#include "beamlab/singular.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace beamlab {

double cutoffPhi(double s) noexcept {
    if (s <= 1.0) return 0.0;
    if (s >= 2.0) return 1.0;
    const double x = s - 1.0;
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

double cutoffPhiDerivative(double s) noexcept {
    if (s <= 1.0 || s >= 2.0) return 0.0;
    const double x = s - 1.0;
    return 30.0 * x * x * (1.0 - x) * (1.0 - x);
}

const char* czKernelName(CZKernelId id) noexcept {
    switch (id) {
    case CZKernelId::K1Plus: return "k1+";
    case CZKernelId::K1Minus: return "k1-";
    case CZKernelId::K2Plus: return "k2+";
    case CZKernelId::K2Minus: return "k2-";
    case CZKernelId::KTilde1: return "kt1";
    case CZKernelId::KTilde2Plus: return "kt2+";
    case CZKernelId::KTilde2Minus: return "kt2-";
    case CZKernelId::SchurProbe: return "schur-probe";
    }
    return "?";
}

cplx czKernel(CZKernelId id, long n, long m) noexcept {
    const double an = double(std::labs(n)), am = double(std::labs(m));
    const double dn = double(n), dm = double(m);
    const auto cut = [](double d) { return cutoffPhi(d * d); };
    switch (id) {
    case CZKernelId::K1Plus: {
        const double c = cut(an + am);
        return c == 0.0 ? 0.0 : c / (an + am);
    }
    case CZKernelId::K1Minus: {
        const double c = cut(an - am);
        return c == 0.0 ? 0.0 : c / (an - am);
    }
    case CZKernelId::K2Plus: {
        const double c = cut(an - am);
        return c == 0.0 ? cplx(0.0) : c / cplx(an, am);
    }
    case CZKernelId::K2Minus: {
        const double c = cut(an - am);
        return c == 0.0 ? cplx(0.0) : c / cplx(an, -am);
    }
    case CZKernelId::KTilde1: {
        const double c = cut(dn - dm);
        return c == 0.0 ? 0.0 : c / (dn - dm);
    }
    case CZKernelId::KTilde2Plus: {
        const double c = cut(dn - dm);
        return c == 0.0 ? cplx(0.0) : c / cplx(dn, dm);
    }
    case CZKernelId::KTilde2Minus: {
        const double c = cut(dn - dm);
        return c == 0.0 ? cplx(0.0) : c / cplx(dn, -dm);
    }
    case CZKernelId::SchurProbe: {
        const double d = an - am;
        return 1.0 / (1.0 + d * d);
    }
    }
    return 0.0;
}

ComplexKernel czKernelMatrix(CZKernelId id, const LatticeWindow& w) {
    ComplexKernel K(w, w);
    for (long n = -w.radius(); n <= w.radius(); ++n)
        for (long m = -w.radius(); m <= w.radius(); ++m) K(n, m) = czKernel(id, n, m);
    return K;
}

double reflectionIdentityCheck(CZKernelId id, const LatticeWindow& w) {
    if (w.radius() < 16) throw Error(ErrorCode::InvalidArgument, "window radius must be at least 16");
    CZKernelId tilde;
    bool oneKind;
    switch (id) {
    case CZKernelId::K1Plus:
    case CZKernelId::K1Minus:
        tilde = CZKernelId::KTilde1;
        oneKind = true;
        break;
    case CZKernelId::K2Plus: tilde = CZKernelId::KTilde2Plus, oneKind = false; break;
    case CZKernelId::K2Minus: tilde = CZKernelId::KTilde2Minus, oneKind = false; break;
    default: throw Error(ErrorCode::InvalidArgument, "reflection identities exist for k1 and k2 only");
    }
    const bool plus = id == CZKernelId::K1Plus;
    const auto chiPlus = [](long n) { return n > 0 ? 1.0 : 0.0; };
    const auto chiMinus = [](long n) { return n < 0 ? 1.0 : 0.0; };

    double worst = 0.0;
    for (long j = -w.radius(); j <= w.radius(); ++j) {
        if (j == 0) continue;
        // (1 + tau) delta_j = delta_j + delta_{-j}
        for (long n = -w.radius(); n <= w.radius(); ++n) {
            if (n == 0) continue;
            const cplx lhs = czKernel(id, n, j);
            cplx rhs = 0.0;
            for (long m : {j, -j}) {
                double outer;
                if (oneKind)
                    outer = chiPlus(n) * (plus ? chiMinus(m) : chiPlus(m)) - chiMinus(n) * (plus ? chiPlus(m) : chiMinus(m));
                else
                    outer = chiPlus(n) * chiPlus(m) - chiMinus(n) * chiMinus(m);
                if (outer != 0.0) rhs += outer * czKernel(tilde, n, m);
            }
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

SchurResult schurTest(const ComplexKernel& K, double bound) {
    SchurResult r;
    const Eigen::MatrixXd A = K.entries.cwiseAbs();
    if (A.size() > 0) {
        r.rowSup = A.rowwise().sum().maxCoeff();
        r.colSup = A.colwise().sum().maxCoeff();
    }
    r.passes = r.rowSup <= bound && r.colSup <= bound;
    return r;
}

namespace {

double lpNorm(const Eigen::VectorXcd& x, double p) {
    if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]), p);
    return std::pow(s, 1.0 / p);
}

/// Largest singular value by Lanczos with full reorthogonalization on K^* K.
NormEstimate spectralNorm(const Eigen::MatrixXcd& K, std::uint64_t seed) {
    NormEstimate r;
    const Eigen::Index n = K.cols();
    if (n == 0 || K.cwiseAbs().maxCoeff() == 0.0) return r;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Eigen::VectorXcd q(n);
    for (Eigen::Index i = 0; i < n; ++i) q[i] = cplx(gauss(rng), gauss(rng));
    q.normalize();
    const Eigen::Index maxSteps = std::min<Eigen::Index>(n, 400);
    Eigen::MatrixXcd Q(n, maxSteps);
    std::vector<double> alpha, beta;
    double previous = 0.0;
    for (Eigen::Index k = 0; k < maxSteps; ++k) {
        Q.col(k) = q;
        Eigen::VectorXcd w = K.adjoint() * (K * q);
        alpha.push_back(q.dot(w).real());
        for (int pass = 0; pass < 2; ++pass) w -= Q.leftCols(k + 1) * (Q.leftCols(k + 1).adjoint() * w);
        const double b = w.norm();
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k + 1, k + 1);
        for (Eigen::Index i = 0; i <= k; ++i) {
            T(i, i) = alpha[std::size_t(i)];
            if (i > 0) T(i, i - 1) = T(i - 1, i) = beta[std::size_t(i - 1)];
        }
        const double top = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(T, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
        r.iterations = int(k + 1);
        r.estimate = std::sqrt(std::max(top, 0.0));
        if (k > 2 && std::abs(top - previous) <= 1e-8 * top) break;
        if (b <= 1e-14 * std::sqrt(std::max(top, 1e-300))) break;
        previous = top;
        beta.push_back(b);
        q = w / b;
    }
    return r;
}

} // namespace

NormEstimate lpNormEstimate(const ComplexKernel& K, double p, int probes, std::uint64_t seed) {
    if (!(p >= 1.0)) throw Error(ErrorCode::InvalidArgument, "p must be at least 1");
    if (probes < 32) throw Error(ErrorCode::InvalidArgument, "at least 32 probes are required");
    const Eigen::MatrixXd A = K.entries.cwiseAbs();
    NormEstimate r;
    if (K.entries.size() == 0) return r;
    if (p == 1.0) {
        r.estimate = A.colwise().sum().maxCoeff();
        return r;
    }
    if (std::isinf(p)) {
        r.estimate = A.rowwise().sum().maxCoeff();
        return r;
    }
    if (p == 2.0) return spectralNorm(K.entries, seed);

    r.lowerBoundOnly = true;
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    const Eigen::Index n = K.entries.cols();
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    for (int k = 0; k < probes; ++k) {
        Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
        if (k % 2 == 0) {
            for (Eigen::Index i = 0; i < n; ++i) x[i] = coin(rng) ? 1.0 : -1.0;
        } else {
            for (int s = 0; s < 8; ++s) x[pick(rng)] = coin(rng) ? 1.0 : -1.0;
        }
        const double nx = lpNorm(x, p);
        if (nx > 0.0) r.estimate = std::max(r.estimate, lpNorm(K.entries * x, p) / nx);
        ++r.iterations;
    }
    return r;
}

NormEstimate lpNormEstimate(CZKernelId id, double p, const LatticeWindow& w, int probes, std::uint64_t seed) {
    return lpNormEstimate(czKernelMatrix(id, w), p, probes, seed);
}

} // namespace beamlab
