#include "beamlab/resolvent.hpp"

#include <cmath>
#include <numbers>

namespace beamlab {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

void requireBand(double mu) {
    if (!(mu > 0.0 && mu < 2.0)) throw Error(ErrorCode::OutOfRange, "mu must lie in (0, 2)");
}

void fillCommon(PhaseData& p) {
    p.b = -2.0 * std::asinh(0.5 * p.mu);
    p.a2 = -1.0 / std::sqrt(1.0 + 0.25 * p.mu * p.mu);
}

} // namespace

// Half-angle forms avoid the cancellation in arccos(1 - mu^2/2) at small mu.
PhaseData phaseData(double mu) {
    requireBand(mu);
    PhaseData p;
    p.mu = mu;
    p.thetaPlus = -2.0 * std::asin(0.5 * mu);
    p.thetaTildePlus = -2.0 * std::acos(0.5 * mu);
    p.a1 = 2.0 / std::sqrt((2.0 - mu) * (2.0 + mu));
    fillCommon(p);
    return p;
}

PhaseData phaseDataFromThetaPlus(double thetaPlus) {
    if (!(thetaPlus > -kPi && thetaPlus < 0.0)) throw Error(ErrorCode::OutOfRange, "thetaPlus must lie in (-pi, 0)");
    PhaseData p;
    p.thetaPlus = thetaPlus;
    p.thetaTildePlus = -kPi - thetaPlus;
    p.mu = -2.0 * std::sin(0.5 * thetaPlus);
    p.a1 = 1.0 / std::cos(0.5 * thetaPlus);
    fillCommon(p);
    return p;
}

PhaseData phaseDataFromThetaTilde(double thetaTilde) {
    if (!(thetaTilde > -kPi && thetaTilde < 0.0))
        throw Error(ErrorCode::OutOfRange, "thetaTildePlus must lie in (-pi, 0)");
    PhaseData p;
    p.thetaTildePlus = thetaTilde;
    p.thetaPlus = -kPi - thetaTilde;
    p.mu = 2.0 * std::cos(0.5 * thetaTilde);
    p.a1 = -1.0 / std::sin(0.5 * thetaTilde);
    fillCommon(p);
    return p;
}

cplx freeResolventKernel(const PhaseData& p, Side s, long d) noexcept {
    const double ad = double(std::labs(d));
    const double sg = sideSign(s);
    const cplx osc = sg * I * p.a1 * std::exp(-sg * I * p.thetaPlus * ad);
    const double ev = p.a2 * std::exp(p.b * ad);
    return (osc + ev) / (4.0 * p.mu * p.mu * p.mu);
}

cplx freeResolventKernel(double mu, Side s, long n, long m) { return freeResolventKernel(phaseData(mu), s, n - m); }

ComplexKernel freeResolventMatrix(double mu, Side s, const LatticeWindow& rows, const LatticeWindow& cols) {
    const PhaseData p = phaseData(mu);
    ComplexKernel K(rows, cols);
    const long span = rows.radius() + cols.radius();
    std::vector<cplx> byDistance(std::size_t(span) + 1);
    for (long d = 0; d <= span; ++d) byDistance[std::size_t(d)] = freeResolventKernel(p, s, d);
    for (long n = -rows.radius(); n <= rows.radius(); ++n)
        for (long m = -cols.radius(); m <= cols.radius(); ++m) K(n, m) = byDistance[std::size_t(std::labs(n - m))];
    return K;
}

cplx laplaceResolventKernel(cplx omega, long d) {
    if (omega.imag() == 0.0 && omega.real() >= 0.0 && omega.real() <= 4.0)
        throw Error(ErrorCode::OutOfRange, "omega lies on the spectrum of -Delta; use a boundary value");
    if (omega.imag() == 0.0 && omega.real() < 0.0) return laplaceResolventNegative(std::sqrt(-omega.real()), d);
    cplx theta = std::acos(1.0 - 0.5 * omega);
    if (theta.imag() > 0.0) theta = -theta;
    return -I * std::exp(-I * theta * double(std::labs(d))) / (2.0 * std::sin(theta));
}

cplx laplaceResolventLow(double mu, Side s, long d) {
    requireBand(mu);
    const double th = -2.0 * std::asin(0.5 * mu);
    const double sg = sideSign(s);
    return -sg * I * std::exp(-sg * I * th * double(std::labs(d))) / (2.0 * std::sin(th));
}

cplx laplaceResolventHigh(const PhaseData& p, Side s, long d) noexcept {
    // R^-(4 - mu^2) = i e^{i thetaTilde |d|} / (2 sin thetaTilde), R^+ is its conjugate.
    const double sg = sideSign(s);
    return -sg * I * std::exp(-sg * I * p.thetaTildePlus * double(std::labs(d))) / (2.0 * std::sin(p.thetaTildePlus));
}

cplx laplaceResolventHigh(double mu, Side s, long d) { return laplaceResolventHigh(phaseData(mu), s, d); }

double laplaceResolventNegative(double mu, long d) {
    if (!(mu > 0.0)) throw Error(ErrorCode::OutOfRange, "mu must be positive");
    const double kappa = 2.0 * std::asinh(0.5 * mu);
    return std::exp(-kappa * double(std::labs(d))) / (2.0 * std::sinh(kappa));
}

CancellationCoefficients cancellationCoefficients(double mu) {
    const PhaseData p = phaseData(mu);
    const double th = p.thetaPlus;
    CancellationCoefficients c;
    c.b1 = -th * p.a1;
    c.b2 = -p.b * p.a2;
    c.c1plus = -I * th * th * p.a1;
    c.c1minus = I * th * th * p.a1;
    c.c2 = p.b * p.b * p.a2;
    c.c3 = th * p.a1 + p.b * p.a2;
    c.d1 = th * th * th * p.a1;
    c.d2 = -p.b * p.b * p.b * p.a2;
    c.d3 = 2.0 * c.c3;
    return c;
}

} // namespace beamlab
