#pragma once

#include <string>
#include <vector>

#include "beamlab/fit.hpp"
#include "beamlab/resolvent.hpp"
#include "beamlab/spectral.hpp"
#include "beamlab/threshold.hpp"

namespace beamlab {

/// Stationary quadrature over mu in (0, 2), split into three bands at mu0 and
/// 2 - mu0. The edge bands are integrated in thetaPlus (near 0) and
/// thetaTildePlus (near 2), which absorb the factor a1 of the integrand.
struct QuadratureConfig {
    double mu0 = 0.1;
    double muMin = 1e-4;          // mu distance to 0 left out; the cut near 2 sits at the same |thetaTildePlus|
    double resonantMuMin = 1e-3;  // used instead when a threshold is not regular
    bool substituteLow = true;
    bool substituteHigh = true;
    int gradingLevels = 8;        // dyadic initial panels toward each endpoint
    int midPanels = 16;
    double absTol = 1e-7;         // per band, max-norm of the integral
    int maxIntervals = 40000;
    double conditionCap = 1e15;
};

void validate(const QuadratureConfig& cfg);

struct BandDiagnostics {
    std::string name;
    double lo = 0.0, hi = 0.0; // in the band's integration variable
    double errorEstimate = 0.0;
    int evaluations = 0;
    int intervals = 0;
    double maxCondition = 0.0;
};

struct WaveDiagnostics {
    std::vector<BandDiagnostics> bands;
    double muMinUsed = 0.0;
    double endpointTail = 0.0; // size estimate of the omitted endpoint pieces
    Classification zeroClass = Classification::Regular;
    Classification sixteenClass = Classification::Regular;
    double totalError() const;
};

struct WaveOperatorKernel {
    ComplexKernel kernel;
    Side side = Side::Plus;
    WaveDiagnostics diagnostics;
};

/// W(n, m) = delta_nm - (2 / (pi i)) int_0^2 mu^3 [R0 v M^{-1} v (R0^+ - R0^-)](n, m) dmu,
/// with R0 = R0^s and M = M_s for the side s.
WaveOperatorKernel stationaryWaveOperator(const Potential& V, const LatticeWindow& w, const QuadratureConfig& cfg = {},
                                          Side side = Side::Plus);

/// W f sampled on rows, without forming the kernel.
ComplexSequence applyWaveOperator(const Potential& V, const ComplexSequence& f, const LatticeWindow& rows,
                                  const QuadratureConfig& cfg = {}, Side side = Side::Plus,
                                  WaveDiagnostics* diagnostics = nullptr);

/// W^* g sampled on cols.
ComplexSequence applyWaveOperatorAdjoint(const Potential& V, const ComplexSequence& g, const LatticeWindow& cols,
                                         const QuadratureConfig& cfg = {}, Side side = Side::Plus,
                                         WaveDiagnostics* diagnostics = nullptr);

struct IntertwiningOptions {
    long adjointRadius = 256;  // window carrying W^* delta_0
    AcPolicy ac;
};

struct IntertwiningResult {
    double discrepancy = 0.0;  // l2 over the window
    double reference = 0.0;    // l2 norm of exp(-itH) P_ac delta_0 on the window
    long truncationRadius = 0;
    std::vector<double> droppedValues;
};

/// || exp(-itH) P_ac delta_0 - W exp(-it Delta^2) W^* delta_0 || on the window.
IntertwiningResult intertwiningCheck(const Potential& V, double t, const LatticeWindow& window,
                                     const QuadratureConfig& cfg = {}, const IntertwiningOptions& opt = {});

struct GrowthRow {
    long N = 0;
    double supNorm = 0.0;
    cplx valueAtProbe;
    double l2Ratio = 0.0;
};

struct GrowthTable {
    std::vector<GrowthRow> rows;
    LinearFit fit; // supNorm = alpha ln N + beta
    long probeOffset = 2;
};

/// W f_N for f_N the indicator of [-N, N], sampled on |n| <= 16 N + 64 so the
/// slowly decaying tail of (W - I) f_N is kept in the l2 ratio.
GrowthTable endpointGrowthExperiment(const Potential& V, const std::vector<long>& Ns, long probeOffset = 2,
                                     const QuadratureConfig& cfg = {});

/// ((i - 1)/4) sum_{k=2}^{2N+2} 1/k + (1/2) sum_{k=2}^{2N+2} (-1)^k / k
cplx harmonicReference(long N);

enum class Averaging { Cesaro, Abel };

struct WaveOracleOptions {
    Averaging averaging = Averaging::Cesaro;
    double tolerance = 1e-2;     // relative l2 change between T/2 and T
    bool checkConvergence = true;
    long truncationRadius = 0;   // 0 picks 10.4 T + 4 (window) + 256
    double timeStep = 0.1;
};

struct WaveOracleResult {
    ComplexSequence value;
    double T = 0.0;
    double relativeChange = 0.0; // against the run at T/2 when checked
    long truncationRadius = 0;
};

/// Average of exp(itH) exp(-it Delta^2) f over t in [-T, -T/2] (the limit
/// direction of W+), with H truncated to a large window and the free flow
/// exact. Throws NotConverged when the T/2 and T averages differ by more
/// than the tolerance.
WaveOracleResult timeDependentWaveOracle(const Potential& V, const ComplexSequence& f, double T,
                                         const WaveOracleOptions& opt = {});

} // namespace beamlab
