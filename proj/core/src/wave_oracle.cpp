#include <cmath>

#include "beamlab/dispersive.hpp"
#include "beamlab/waveop.hpp"

namespace beamlab {

namespace {

const cplx I(0.0, 1.0);

/// Dirichlet-truncated H on a window, applied as a stencil.
class BandedH {
public:
    BandedH(const Potential& V, const LatticeWindow& w) : w_(w), diag_(w.size()) {
        for (long n = -w.radius(); n <= w.radius(); ++n) diag_[w.offset(n)] = 6.0 + V(n);
        lo_ = std::min(0.0, diag_.minCoeff() - 6.0);
        hi_ = 16.0 + std::max(0.0, diag_.maxCoeff() - 6.0);
    }

    void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
        const Eigen::Index n = x.size();
        for (Eigen::Index i = 0; i < n; ++i) {
            cplx s = diag_[i] * x[i];
            if (i >= 1) s -= 4.0 * x[i - 1];
            if (i >= 2) s += x[i - 2];
            if (i + 1 < n) s -= 4.0 * x[i + 1];
            if (i + 2 < n) s += x[i + 2];
            y[i] = s;
        }
    }

    /// exp(i tau H) x, split into steps short enough for the Bessel coefficients.
    Eigen::VectorXcd evolve(double tau, const Eigen::VectorXcd& x) const {
        const double r = 0.5 * (hi_ - lo_);
        const int steps = std::max(1, int(std::ceil(std::abs(tau) * r / 64.0)));
        Eigen::VectorXcd y = x;
        for (int i = 0; i < steps; ++i) y = chebyshevStep(tau / steps, y);
        return y;
    }

private:
    Eigen::VectorXcd chebyshevStep(double tau, const Eigen::VectorXcd& x) const {
        if (tau == 0.0) return x;
        const double c = 0.5 * (hi_ + lo_), r = 0.5 * (hi_ - lo_) + 1e-9;
        const double arg = std::abs(tau) * r;
        const cplx step = tau > 0.0 ? I : -I;
        Eigen::VectorXcd t0 = x, t1(x.size()), t2(x.size()), hx(x.size());
        apply(t0, hx);
        t1 = (hx - c * t0) / r;
        Eigen::VectorXcd acc = std::cyl_bessel_j(0.0, arg) * t0 + 2.0 * step * std::cyl_bessel_j(1.0, arg) * t1;
        cplx phase = step;
        for (int k = 2;; ++k) {
            const double jk = std::cyl_bessel_j(double(k), arg);
            apply(t1, hx);
            t2 = 2.0 * (hx - c * t1) / r - t0;
            phase *= step;
            acc += 2.0 * phase * jk * t2;
            if (k > arg + 8 && std::abs(jk) < 1e-17) break;
            t0.swap(t1);
            t1.swap(t2);
        }
        return std::exp(I * tau * c) * acc;
    }

    LatticeWindow w_;
    Eigen::VectorXd diag_;
    double lo_ = 0.0, hi_ = 16.0;
};

/// Weighted average over s in [T/2, T] of exp(-isH) exp(is Delta^2) f, by a
/// Horner sweep so each step needs only a short Chebyshev propagation.
Eigen::VectorXcd averaged(const BandedH& H, const ComplexSequence& f, const LatticeWindow& trunc, double T,
                          const WaveOracleOptions& opt) {
    const double s0 = 0.5 * T, len = 0.5 * T;
    const int K = std::max(2, int(std::ceil(len / opt.timeStep)));
    const double h = len / K;
    std::vector<double> w(std::size_t(K) + 1);
    double norm = 0.0;
    for (int j = 0; j <= K; ++j) {
        const double trap = (j == 0 || j == K) ? 0.5 : 1.0;
        const double s = s0 + j * h;
        w[std::size_t(j)] = trap * (opt.averaging == Averaging::Abel ? std::exp(-(s - s0) / (0.25 * T)) : 1.0);
        norm += w[std::size_t(j)];
    }
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(trunc.size());
    for (int j = K; j >= 0; --j) {
        if (j < K) acc = H.evolve(-h, acc);
        const ComplexSequence psi = freePropagate(f, -(s0 + j * h), trunc);
        acc += (w[std::size_t(j)] / norm) * psi.values;
    }
    return H.evolve(-s0, acc);
}

} // namespace

WaveOracleResult timeDependentWaveOracle(const Potential& V, const ComplexSequence& f, double T,
                                         const WaveOracleOptions& opt) {
    if (!(T > 0.0)) throw Error(ErrorCode::InvalidArgument, "T must be positive");
    if (!(opt.timeStep > 0.0)) throw Error(ErrorCode::InvalidArgument, "time step must be positive");
    WaveOracleResult r;
    r.T = T;
    r.truncationRadius = opt.truncationRadius > 0
                             ? opt.truncationRadius
                             : long(std::ceil(kBiLaplacianMaxSpeed * T)) + 4 * f.window.radius() + 256;
    if (r.truncationRadius < 4 * f.window.radius())
        throw Error(ErrorCode::InvalidArgument, "truncation radius must be at least 4x the window");
    const LatticeWindow trunc(r.truncationRadius);
    const BandedH H(V, trunc);
    const auto restrict = [&](const Eigen::VectorXcd& x) {
        return x.segment(trunc.offset(-f.window.radius()), f.window.size()).eval();
    };
    const Eigen::VectorXcd full = restrict(averaged(H, f, trunc, T, opt));
    r.value = ComplexSequence(f.window, full);
    if (opt.checkConvergence) {
        const Eigen::VectorXcd half = restrict(averaged(H, f, trunc, 0.5 * T, opt));
        const double scale = std::max(full.norm(), 1e-300);
        r.relativeChange = (full - half).norm() / scale;
        if (r.relativeChange > opt.tolerance)
            throw Error(ErrorCode::NotConverged, "oracle moved by " + std::to_string(r.relativeChange) +
                                                     " between T/2 and T");
    }
    return r;
}

} // namespace beamlab
