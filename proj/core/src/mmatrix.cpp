#include "beamlab/mmatrix.hpp"

#include <cmath>
#include <limits>

namespace beamlab {

namespace {

double conditionOf(const Eigen::MatrixXcd& A) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    const auto& s = svd.singularValues();
    const double lo = s(s.size() - 1);
    return lo > 0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

} // namespace

MMatrix buildM(const Potential& V, double mu, Side side) { return buildM(V, phaseData(mu), side); }

MMatrix buildM(const Potential& V, const PhaseData& p, Side side) {
    if (V.isZero()) throw Error(ErrorCode::DegeneratePotential, "M(mu) needs a nonzero potential");
    if (V.background() != 0.0) throw Error(ErrorCode::InvalidArgument, "M(mu) needs a finitely supported potential");
    if (!(p.mu > 0.0 && p.mu < 2.0)) throw Error(ErrorCode::OutOfRange, "mu must lie in (0, 2)");
    MMatrix M;
    M.point = {p.mu, side};
    M.support = V.support();
    const Eigen::VectorXd v = V.sqrtAbs();
    const Eigen::VectorXd U = V.signs();
    const auto s = Eigen::Index(M.support.size());
    M.entries.resize(s, s);
    for (Eigen::Index a = 0; a < s; ++a)
        for (Eigen::Index b = 0; b < s; ++b)
            M.entries(a, b) = v[a] * freeResolventKernel(p, side, M.support[a] - M.support[b]) * v[b];
    M.entries.diagonal() += U.cast<cplx>();
    M.conditionNumber = conditionOf(M.entries);
    return M;
}

MInverse invertM(const MMatrix& M, double conditionCap) {
    if (!(M.conditionNumber <= conditionCap))
        throw Error(ErrorCode::NearSingular, "condition number " + std::to_string(M.conditionNumber) + " exceeds cap");
    MInverse r;
    r.conditionNumber = M.conditionNumber;
    r.inverse = M.entries.fullPivLu().inverse();
    const auto s = M.entries.rows();
    r.residual = (M.entries * r.inverse - Eigen::MatrixXcd::Identity(s, s)).cwiseAbs().maxCoeff();
    return r;
}

ComplexKernel perturbedResolventKernel(const Potential& V, double mu, Side side, const LatticeWindow& w,
                                       double conditionCap) {
    const PhaseData p = phaseData(mu);
    const MMatrix M = buildM(V, p, side);
    const MInverse Mi = invertM(M, conditionCap);
    const Eigen::VectorXd v = V.sqrtAbs();
    const auto s = Eigen::Index(M.support.size());

    ComplexKernel K = freeResolventMatrix(mu, side, w, w);
    Eigen::MatrixXcd A(w.size(), s);
    for (long n = -w.radius(); n <= w.radius(); ++n)
        for (Eigen::Index k = 0; k < s; ++k) A(w.offset(n), k) = freeResolventKernel(p, side, n - M.support[k]) * v[k];
    K.entries -= A * Mi.inverse * A.transpose();
    return K;
}

} // namespace beamlab
