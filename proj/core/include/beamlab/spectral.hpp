#pragma once

#include <functional>
#include <vector>

#include "beamlab/lattice.hpp"

namespace beamlab {

/// Full eigendecomposition of the Dirichlet-truncated H on a window.
struct TruncatedSpectrum {
    LatticeWindow window;
    Eigen::VectorXd values;  // ascending
    Eigen::MatrixXd vectors; // orthonormal columns
};

TruncatedSpectrum truncatedSpectrum(const Potential& V, const LatticeWindow& w);

/// Which eigenpairs count as absolutely continuous on the truncated lattice.
struct AcPolicy {
    double delta = 1e-6;         // band is [-delta, 16 + delta]
    double localizedMass = 0.99; // drop in-band states with this much mass near the support
    long localizationPad = 4;    // "near" = within supportRadius + pad of the origin
};

struct AcSelection {
    std::vector<Eigen::Index> retained;
    std::vector<double> droppedValues;
};

AcSelection selectAc(const TruncatedSpectrum& s, const Potential& V, const AcPolicy& policy = {});

/// Sum over retained k of g(lambda_k) <f, u_k> u_k, restricted to the output window.
ComplexSequence spectralApply(const TruncatedSpectrum& s, const AcSelection& sel,
                              const std::function<cplx(double)>& g, const ComplexSequence& f,
                              const LatticeWindow& out);

/// Kernel of g(H) P_ac on rows x cols.
ComplexKernel spectralKernel(const TruncatedSpectrum& s, const AcSelection& sel,
                             const std::function<cplx(double)>& g, const LatticeWindow& rows,
                             const LatticeWindow& cols);

} // namespace beamlab
