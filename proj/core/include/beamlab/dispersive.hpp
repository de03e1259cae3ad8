#pragma once

#include <functional>
#include <vector>

#include "beamlab/fit.hpp"
#include "beamlab/spectral.hpp"

namespace beamlab {

/// Phase Phi_{a,s}(theta) = sqrt((2 - 2 cos theta)^2 + a^2) - s theta.
struct BeamPhase {
    double a = 0.0;
    double s = 0.0;

    double value(double theta) const;
    /// Derivative of order k in 0..4.
    double derivative(double theta, int k) const;
};

/// Kernel of exp(-i t sqrt(Delta^2 + a^2)) at distance d, normalized so that
/// t = 0 gives the identity. Adaptive Gauss-Kronrod panels split at the
/// stationary points of the phase.
cplx freeBeamKernel(double a, double t, long d, double absTol = 1e-8);

/// Same kernel for all |d| <= radius at once, by FFT.
std::vector<cplx> freeBeamKernelFFT(double a, double t, long radius);

/// Applies the Fourier multiplier m(theta) to f and samples the result on
/// out. reach bounds the spatial extent of the multiplier's kernel.
ComplexSequence propagateSymbol(const ComplexSequence& f, const std::function<cplx(double)>& multiplier,
                                const LatticeWindow& out, double reach);

/// exp(-i t Delta^2) f on the infinite lattice, sampled on out.
ComplexSequence freePropagate(const ComplexSequence& f, double t, const LatticeWindow& out);

inline constexpr double kBiLaplacianMaxSpeed = 10.392304845413264; // 6 sqrt(3)

struct DecayFit {
    std::vector<double> times;
    std::vector<double> supNorms;
    LinearFit fit;
};

/// Sup over |n| <= 3t of |freeBeamKernel(a, t, n)|, fitted against t on a log scale.
DecayFit decayFit(double a, const std::vector<double>& tGrid);

double cubicH(double a, double x) noexcept;
/// Real roots of h_a in [lo, hi], multiple roots reported once.
std::vector<double> cubicRealRoots(double a, double lo = -1.0, double hi = 1.0);
/// Root x0 in (-1, 0) of h_a by bisection; NoRoot when a = 0.
double cubicRootX0(double a);

struct InflectionPoint {
    double theta = 0.0;
    double phi2 = 0.0, phi3 = 0.0, phi4 = 0.0;
};

struct StationaryAnalysis {
    double a = 0.0, s = 0.0;
    bool hasTheta0 = false;
    double x0 = 0.0, theta0 = 0.0, s0 = 0.0, hAtX0 = 0.0;
    std::vector<InflectionPoint> inflections; // zeros of Phi'' on [-pi, 0]
    std::vector<double> stationaryPoints;     // zeros of Phi' on [-pi, 0]
};

StationaryAnalysis stationaryAnalysis(double a, double s);

struct PerturbedPropagators {
    ComplexKernel cosKernel;
    ComplexKernel sincKernel;
    std::vector<double> retainedValues;
    std::vector<double> droppedValues;
};

/// cos(t sqrt(H + a^2)) P_ac and sin(t sqrt(H + a^2)) / (t sqrt(H + a^2)) P_ac
/// by spectral calculus on a truncated lattice. Without a spectrum the
/// truncation radius is window + 2.2 |t| + 64.
PerturbedPropagators perturbedPropagators(const Potential& V, double a, double t, const LatticeWindow& window,
                                          const AcPolicy& policy = {}, const TruncatedSpectrum* spectrum = nullptr);

/// Decay of the cos propagator: sup over all rows and over columns within
/// supportRadius + 8 of the origin, on one truncation of radius 2.2 tmax + 64.
DecayFit perturbedDecayFit(const Potential& V, double a, const std::vector<double>& tGrid,
                           const AcPolicy& policy = {});

} // namespace beamlab
