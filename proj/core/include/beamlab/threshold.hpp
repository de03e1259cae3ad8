#pragma once

#include <optional>
#include <string>
#include <vector>

#include "beamlab/lattice.hpp"

namespace beamlab {

enum class ThresholdKernelId { Gm1, G0, G1, G3, Gt0, Gt1, Gt2 };
enum class Threshold { Zero, Sixteen };

const char* kernelName(ThresholdKernelId id) noexcept;
const char* thresholdName(Threshold t) noexcept;

/// Closed form of a threshold kernel as a function of d = |n - m|.
double thresholdKernelValue(ThresholdKernelId id, long d) noexcept;
ComplexKernel thresholdKernel(ThresholdKernelId id, const LatticeWindow& w);

/// Max interior residual of Delta^2 G0 - delta or (Delta^2 - 16) J Gt0 J - delta.
double checkFundamentalSolution(ThresholdKernelId id, const LatticeWindow& w);

/// Outcome of one null-space decision on a nested projection space.
struct NullSpaceDecision {
    std::string stage;                  // e.g. "S1 = ker T0 on S0"
    std::vector<double> singularValues; // of the restricted operator, descending
    double scale = 0.0;                 // reference magnitude for the relative test
    double tolerance = 0.0;
    int dimension = 0;                  // of the space the operator acts on
    int nullity = 0;
    double margin = 0.0;                // log10 distance of the closest value to the gray band
};

struct ChainOptions {
    double tol = 1e-8;
    double grayFactor = 100.0;
};

/// Zero-threshold chain on the finite index set supp v. Each projection is
/// stored both as a matrix and as an orthonormal basis of its range.
struct ProjectionChainZero {
    std::vector<long> support;
    Eigen::VectorXd v, U;
    double l1 = 0.0;
    Eigen::MatrixXd P, Q, S0, S1, S2, S3;
    Eigen::MatrixXd basisQ, basisS0, basisS1, basisS2, basisS3;
    Eigen::MatrixXd T, T0, T1, T2, D0, D2;
    Eigen::MatrixXd vGm1v, vG0v, vG1v, vG3v;
    std::vector<NullSpaceDecision> decisions;
};

struct ProjectionChainSixteen {
    std::vector<long> support;
    Eigen::VectorXd vt, U;
    double l1 = 0.0;
    Eigen::MatrixXd Pt, Qt, St0, St1, St2;
    Eigen::MatrixXd basisQt, basisSt0, basisSt1, basisSt2;
    Eigen::MatrixXd Tt, Tt0, Tt1, Tt2;
    Eigen::MatrixXd vGt0v, vGt1v, vGt2v;
    std::vector<NullSpaceDecision> decisions;
};

ProjectionChainZero buildZeroChain(const Potential& V, const ChainOptions& opt = {});
ProjectionChainSixteen buildSixteenChain(const Potential& V, const ChainOptions& opt = {});

enum class Classification { Regular, FirstKindResonance, SecondKindResonance, Resonance, Eigenvalue };
const char* classificationName(Classification c) noexcept;

struct ResonanceReport {
    Threshold threshold = Threshold::Zero;
    Classification classification = Classification::Regular;
    double nullTolerance = 0.0;
    std::vector<NullSpaceDecision> decisions;
    std::vector<std::string> warnings;
    /// Recovered solution of H phi = lambda phi, present unless Regular.
    std::optional<ComplexSequence> phi;
    /// f = U v phi on supp v used for the recovery.
    Eigen::VectorXd f;
    double residualSup = 0.0;       // sup over the report-window interior of |H phi - lambda phi|
    double orthogonalityResidual = 0.0;
    double recoveryResidual = 0.0;  // max |f - U v phi| on supp v before normalization
};

ResonanceReport classify(const Potential& V, Threshold threshold, const ChainOptions& opt = {});

/// Window used for recovered resonance functions.
LatticeWindow reportWindow(const Potential& V);

} // namespace beamlab
