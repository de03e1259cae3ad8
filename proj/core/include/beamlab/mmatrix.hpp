#pragma once

#include <string>
#include <vector>

#include "beamlab/fit.hpp"
#include "beamlab/resolvent.hpp"
#include "beamlab/threshold.hpp"

namespace beamlab {

/// M(mu) = U + v R0^s(mu^4) v on supp v.
struct MMatrix {
    SpectralPoint point;
    std::vector<long> support;
    Eigen::MatrixXcd entries;
    double conditionNumber = 0.0;
};

struct MInverse {
    Eigen::MatrixXcd inverse;
    double residual = 0.0; // max-entry norm of M M^{-1} - I
    double conditionNumber = 0.0;
};

inline constexpr double kDefaultConditionCap = 1e12;

MMatrix buildM(const Potential& V, double mu, Side side = Side::Plus);
MMatrix buildM(const Potential& V, const PhaseData& p, Side side = Side::Plus);
MInverse invertM(const MMatrix& M, double conditionCap = kDefaultConditionCap);

/// R_V = R0 - R0 v M^{-1} v R0 on a square window.
ComplexKernel perturbedResolventKernel(const Potential& V, double mu, Side side, const LatticeWindow& w,
                                       double conditionCap = kDefaultConditionCap);

struct ProbeSample {
    double distance = 0.0; // mu at zero, 2 - mu at sixteen
    double mu = 0.0;
    double norm = 0.0;
    double conditionNumber = 0.0;
    bool nearSingular = false; // double-precision M would exceed the cap
};

struct BlowupProbeResult {
    Threshold threshold = Threshold::Zero;
    std::vector<ProbeSample> samples;
    LinearFit fit;
};

/// Default probe grid of distances to the threshold: two decades ending one
/// decade below mu0, eight points per decade.
std::vector<double> defaultProbeGrid(double mu0 = 0.1);

/// Log-log fit of the spectral norm of M^{-1} against the distance to the
/// threshold. M is assembled and inverted in 113-bit floating point so the
/// fit is not limited by the conditioning of M in double precision.
BlowupProbeResult blowupProbe(const Potential& V, Threshold threshold, const std::vector<double>& grid,
                              double conditionCap = kDefaultConditionCap);

enum class CancellationTarget { vQ, vS0, vS1, vS2, SixteenVQt };
const char* cancellationName(CancellationTarget t) noexcept;

struct CancellationProbeResult {
    CancellationTarget target = CancellationTarget::vQ;
    std::vector<ProbeSample> samples;
    LinearFit fit;
};

/// Slope of log ||R0^+(mu^4) v Pi|| against log mu (or the -Delta boundary
/// value at 4 - mu^2 against log(2 - mu)). The norm is the l2(supp) -> l^inf
/// operator norm over rows |n| <= max(4 R + 32, ceil(16 / theta)), so the
/// far-field scale 1/mu where the leading order lives is always covered.
CancellationProbeResult cancellationOrderProbe(const Potential& V, CancellationTarget target,
                                               const std::vector<double>& grid, const ChainOptions& opt = {});

} // namespace beamlab
