#include "beamlab/spectral.hpp"

#include <cmath>

#include <lapacke.h>

namespace beamlab {

namespace {

/// Max over k of |H u_k - lambda_k u_k| and of | |u_k| - 1 |, using the stencil.
double eigenResidual(const Potential& V, const LatticeWindow& w, const TruncatedSpectrum& s) {
    const Eigen::Index n = w.size();
    double worst = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto u = s.vectors.col(k);
        for (Eigen::Index i = 0; i < n; ++i) {
            double hu = (6.0 + V(w.index(i))) * u[i];
            if (i >= 1) hu -= 4.0 * u[i - 1];
            if (i >= 2) hu += u[i - 2];
            if (i + 1 < n) hu -= 4.0 * u[i + 1];
            if (i + 2 < n) hu += u[i + 2];
            const double r = std::abs(hu - s.values[k] * u[i]);
            if (!(r <= worst)) worst = std::isnan(r) ? INFINITY : r;
        }
        worst = std::max(worst, std::abs(u.norm() - 1.0));
    }
    return worst;
}

} // namespace

// The result is verified against the stencil; some OpenBLAS kernels return
// corrupted eigenvectors, in which case Eigen's solver is used instead.
TruncatedSpectrum truncatedSpectrum(const Potential& V, const LatticeWindow& w) {
    Eigen::MatrixXd A = hamiltonianMatrix(V, w);
    const lapack_int n = lapack_int(A.rows());
    TruncatedSpectrum s;
    s.window = w;
    s.values.resize(n);
    s.vectors.resize(n, n);
    std::vector<lapack_int> support(2 * std::size_t(n));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'A', 'L', n, A.data(), n, 0.0, 0.0, 0, 0, 0.0,
                                           &found, s.values.data(), s.vectors.data(), n, support.data());
    if (info == 0 && found == n && eigenResidual(V, w, s) < 1e-9) return s;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonianMatrix(V, w));
    if (es.info() != Eigen::Success) throw Error(ErrorCode::NotConverged, "symmetric eigensolver failed");
    s.values = es.eigenvalues();
    s.vectors = es.eigenvectors();
    return s;
}

AcSelection selectAc(const TruncatedSpectrum& s, const Potential& V, const AcPolicy& policy) {
    AcSelection sel;
    const long reach = V.isZero() ? -1 : V.supportRadius() + policy.localizationPad;
    for (Eigen::Index k = 0; k < s.values.size(); ++k) {
        const double lam = s.values[k];
        bool keep = lam >= -policy.delta && lam <= 16.0 + policy.delta;
        if (keep && reach >= 0) {
            const long r = std::min(reach, s.window.radius());
            const double near = s.vectors.col(k).segment(s.window.offset(-r), 2 * r + 1).squaredNorm();
            if (near > policy.localizedMass) keep = false;
        }
        if (keep)
            sel.retained.push_back(k);
        else
            sel.droppedValues.push_back(lam);
    }
    return sel;
}

namespace {

Eigen::VectorXcd lift(const ComplexSequence& f, const LatticeWindow& w) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(w.size());
    for (long n = -w.radius(); n <= w.radius(); ++n) x[w.offset(n)] = f.at(n);
    return x;
}

Eigen::MatrixXd rowsOf(const TruncatedSpectrum& s, const LatticeWindow& out, const AcSelection& sel) {
    if (out.radius() > s.window.radius()) throw Error(ErrorCode::OutOfRange, "output window exceeds truncation");
    Eigen::MatrixXd U(out.size(), Eigen::Index(sel.retained.size()));
    for (std::size_t j = 0; j < sel.retained.size(); ++j)
        U.col(Eigen::Index(j)) = s.vectors.col(sel.retained[j]).segment(s.window.offset(-out.radius()), out.size());
    return U;
}

} // namespace

ComplexSequence spectralApply(const TruncatedSpectrum& s, const AcSelection& sel,
                              const std::function<cplx(double)>& g, const ComplexSequence& f,
                              const LatticeWindow& out) {
    const Eigen::VectorXcd x = lift(f, s.window);
    Eigen::VectorXcd coeff(Eigen::Index(sel.retained.size()));
    for (std::size_t j = 0; j < sel.retained.size(); ++j) {
        const Eigen::Index k = sel.retained[j];
        coeff[Eigen::Index(j)] = g(s.values[k]) * s.vectors.col(k).cast<cplx>().dot(x);
    }
    return ComplexSequence(out, rowsOf(s, out, sel).cast<cplx>() * coeff);
}

ComplexKernel spectralKernel(const TruncatedSpectrum& s, const AcSelection& sel,
                             const std::function<cplx(double)>& g, const LatticeWindow& rows,
                             const LatticeWindow& cols) {
    const Eigen::MatrixXd Ur = rowsOf(s, rows, sel);
    const Eigen::MatrixXd Uc = rowsOf(s, cols, sel);
    Eigen::VectorXcd gv(Eigen::Index(sel.retained.size()));
    for (std::size_t j = 0; j < sel.retained.size(); ++j) gv[Eigen::Index(j)] = g(s.values[sel.retained[j]]);
    const Eigen::MatrixXcd K = Ur.cast<cplx>() * gv.asDiagonal() * Uc.transpose().cast<cplx>();
    return ComplexKernel(rows, cols, K);
}

} // namespace beamlab
