#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "beamlab/mmatrix.hpp"
#include "beamlab/parallel.hpp"

namespace beamlab {

namespace {

using Quad = boost::multiprecision::cpp_bin_float_quad;
using QuadC = boost::multiprecision::cpp_complex_quad;
using QuadMatrix = std::vector<std::vector<QuadC>>;

/// M(mu) for the + boundary value, with mu = x or 2 - x held exactly.
QuadMatrix quadM(const Potential& V, double distance, Threshold th) {
    const Quad x(distance);
    const Quad mu = th == Threshold::Zero ? x : Quad(2) - x;
    const Quad gap = th == Threshold::Zero ? Quad(2) - mu : x;
    const Quad half = mu / 2;
    const Quad theta = -2 * asin(half);
    const Quad b = -2 * log(half + sqrt(1 + half * half));
    const Quad a1 = 2 / sqrt(gap * (2 + mu));
    const Quad a2 = -1 / sqrt(1 + half * half);
    const Quad denom = 4 * mu * mu * mu;

    const auto idx = V.support();
    std::vector<Quad> v(idx.size());
    std::vector<int> U(idx.size());
    std::size_t i = 0;
    for (const auto& e : V.entries()) {
        v[i] = sqrt(Quad(std::abs(e.second)));
        U[i] = e.second > 0 ? 1 : -1;
        ++i;
    }
    const std::size_t s = idx.size();
    QuadMatrix M(s, std::vector<QuadC>(s));
    for (std::size_t r = 0; r < s; ++r) {
        for (std::size_t c = 0; c < s; ++c) {
            const Quad d(std::labs(idx[r] - idx[c]));
            const Quad ph = theta * d;
            // i a1 e^{-i theta d} + a2 e^{b d}
            const Quad re = a1 * sin(ph) + a2 * exp(b * d);
            const Quad im = a1 * cos(ph);
            M[r][c] = QuadC(re * v[r] * v[c] / denom, im * v[r] * v[c] / denom);
        }
        M[r][r] += QuadC(Quad(U[r]), Quad(0));
    }
    return M;
}

/// Gauss-Jordan inverse with partial pivoting.
Eigen::MatrixXcd quadInverse(QuadMatrix A) {
    const std::size_t s = A.size();
    QuadMatrix B(s, std::vector<QuadC>(s, QuadC(0)));
    for (std::size_t i = 0; i < s; ++i) B[i][i] = QuadC(1);
    for (std::size_t col = 0; col < s; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < s; ++r)
            if (abs(A[r][col]) > abs(A[piv][col])) piv = r;
        if (abs(A[piv][col]) == 0) throw Error(ErrorCode::NearSingular, "M(mu) is singular in extended precision");
        std::swap(A[piv], A[col]);
        std::swap(B[piv], B[col]);
        const QuadC inv = QuadC(1) / A[col][col];
        for (std::size_t c = 0; c < s; ++c) {
            A[col][c] *= inv;
            B[col][c] *= inv;
        }
        for (std::size_t r = 0; r < s; ++r) {
            if (r == col) continue;
            const QuadC f = A[r][col];
            if (f == QuadC(0)) continue;
            for (std::size_t c = 0; c < s; ++c) {
                A[r][c] -= f * A[col][c];
                B[r][c] -= f * B[col][c];
            }
        }
    }
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
    for (std::size_t r = 0; r < s; ++r)
        for (std::size_t c = 0; c < s; ++c)
            out(Eigen::Index(r), Eigen::Index(c)) = cplx(double(B[r][c].real()), double(B[r][c].imag()));
    return out;
}

double spectralNorm(const Eigen::MatrixXcd& A) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    return svd.singularValues()(0);
}

void requireGrid(const std::vector<double>& grid) {
    if (grid.size() < 6) throw Error(ErrorCode::InvalidArgument, "probe grid needs at least 6 points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0 && grid[i] < 2.0)) throw Error(ErrorCode::OutOfRange, "probe distances must lie in (0, 2)");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw Error(ErrorCode::InvalidArgument, "probe grid must be increasing");
    }
}

template <class Samples>
LinearFit fitSamples(const Samples& samples) {
    std::vector<double> x, y;
    for (const auto& s : samples) {
        x.push_back(s.distance);
        y.push_back(s.norm);
    }
    return logLogFit(x, y);
}

} // namespace

std::vector<double> defaultProbeGrid(double mu0) { return logGrid(mu0 * 1e-3, mu0 * 1e-1, 17); }

BlowupProbeResult blowupProbe(const Potential& V, Threshold threshold, const std::vector<double>& grid,
                              double conditionCap) {
    requireGrid(grid);
    if (V.isZero()) throw Error(ErrorCode::DegeneratePotential, "probe needs a nonzero potential");
    BlowupProbeResult r;
    r.threshold = threshold;
    r.samples.resize(grid.size());
    parallelFor(grid.size(), [&](std::size_t i) {
        ProbeSample& s = r.samples[i];
        s.distance = grid[i];
        s.mu = threshold == Threshold::Zero ? grid[i] : 2.0 - grid[i];
        const Eigen::MatrixXcd inv = quadInverse(quadM(V, grid[i], threshold));
        s.norm = spectralNorm(inv);
        const PhaseData p = threshold == Threshold::Zero ? phaseData(s.mu) : phaseDataFromThetaTilde(-2.0 * std::acos(s.mu / 2.0));
        s.conditionNumber = buildM(V, p).conditionNumber;
        s.nearSingular = !(s.conditionNumber <= conditionCap);
    });
    r.fit = fitSamples(r.samples);
    return r;
}

const char* cancellationName(CancellationTarget t) noexcept {
    switch (t) {
    case CancellationTarget::vQ: return "vQ";
    case CancellationTarget::vS0: return "vS0";
    case CancellationTarget::vS1: return "vS1";
    case CancellationTarget::vS2: return "vS2";
    case CancellationTarget::SixteenVQt: return "sixteen-vQt";
    }
    return "?";
}

CancellationProbeResult cancellationOrderProbe(const Potential& V, CancellationTarget target,
                                               const std::vector<double>& grid, const ChainOptions& opt) {
    requireGrid(grid);
    const bool sixteen = target == CancellationTarget::SixteenVQt;
    Eigen::MatrixXd Pi;
    Eigen::VectorXd w;
    if (sixteen) {
        const auto c = buildSixteenChain(V, opt);
        Pi = c.Qt;
        w = c.vt;
    } else {
        const auto c = buildZeroChain(V, opt);
        switch (target) {
        case CancellationTarget::vQ: Pi = c.Q; break;
        case CancellationTarget::vS0: Pi = c.S0; break;
        case CancellationTarget::vS1: Pi = c.S1; break;
        default: Pi = c.S2; break;
        }
        w = c.v;
    }
    if (Pi.norm() < 0.5) throw Error(ErrorCode::EmptyProjection, std::string(cancellationName(target)) + " projection is zero");
    const auto idx = V.support();
    const Eigen::MatrixXcd vPi = (w.asDiagonal() * Pi).cast<cplx>();

    CancellationProbeResult r;
    r.target = target;
    r.samples.resize(grid.size());
    parallelFor(grid.size(), [&](std::size_t i) {
        ProbeSample& s = r.samples[i];
        s.distance = grid[i];
        const PhaseData p = sixteen ? phaseDataFromThetaTilde(-2.0 * std::acos(1.0 - grid[i] / 2.0)) : phaseData(grid[i]);
        s.mu = p.mu;
        const double scale = sixteen ? std::abs(p.thetaTildePlus) : p.mu;
        const long rows = std::max(4 * V.supportRadius() + 32, long(std::ceil(16.0 / scale)));
        Eigen::RowVectorXcd kernelRow(Eigen::Index(idx.size()));
        double best = 0.0;
        for (long n = -rows; n <= rows; ++n) {
            for (std::size_t k = 0; k < idx.size(); ++k)
                kernelRow[Eigen::Index(k)] = sixteen ? laplaceResolventHigh(p, Side::Minus, n - idx[k])
                                                     : freeResolventKernel(p, Side::Plus, n - idx[k]);
            best = std::max(best, (kernelRow * vPi).norm());
        }
        s.norm = best;
    });
    r.fit = fitSamples(r.samples);
    return r;
}

} // namespace beamlab
