#pragma once

#include "beamlab/lattice.hpp"

namespace beamlab {

enum class Side { Plus, Minus };

inline double sideSign(Side s) noexcept { return s == Side::Plus ? 1.0 : -1.0; }
inline const char* sideName(Side s) noexcept { return s == Side::Plus ? "+" : "-"; }

struct SpectralPoint {
    double mu = 1.0;
    Side side = Side::Plus;
};

// Phase data of the boundary values at lambda = mu^4.
//   2 - 2 cos(thetaPlus) = mu^2,        thetaPlus in (-pi, 0)
//   cos(thetaTildePlus) = mu^2/2 - 1,   thetaTildePlus in (-pi, 0)
//   a1 = (1 - mu^2/4)^{-1/2},  a2 = -(1 + mu^2/4)^{-1/2},  b = -2 asinh(mu/2)
struct PhaseData {
    double mu = 0.0;
    double thetaPlus = 0.0;
    double thetaTildePlus = 0.0;
    double b = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
};

PhaseData phaseData(double mu);
// Same data parametrized by the substitution variables, which keep a1
// accurate at the band edges.
PhaseData phaseDataFromThetaPlus(double thetaPlus);
PhaseData phaseDataFromThetaTilde(double thetaTilde);

cplx freeResolventKernel(const PhaseData& p, Side s, long d) noexcept;
cplx freeResolventKernel(double mu, Side s, long n, long m);
ComplexKernel freeResolventMatrix(double mu, Side s, const LatticeWindow& rows, const LatticeWindow& cols);

// Resolvent of -Delta: off the spectrum [0,4] and the boundary values
// R^s(mu^2) and R^s(4 - mu^2); at omega = -mu^2 the kernel is real.
cplx laplaceResolventKernel(cplx omega, long d);
cplx laplaceResolventLow(double mu, Side s, long d);
cplx laplaceResolventHigh(double mu, Side s, long d);
cplx laplaceResolventHigh(const PhaseData& p, Side s, long d) noexcept;
double laplaceResolventNegative(double mu, long d);

struct CancellationCoefficients {
    double b1 = 0, b2 = 0;
    cplx c1plus, c1minus;
    double c2 = 0, c3 = 0;
    double d1 = 0, d2 = 0, d3 = 0;
};

CancellationCoefficients cancellationCoefficients(double mu);

} // namespace beamlab
