#pragma once

#include <functional>
#include <vector>

#include "beamlab/lattice.hpp"

namespace beamlab {

/// Vector-valued integrand; writes f(x) into out (already sized).
using VectorIntegrand = std::function<void(double x, Eigen::VectorXcd& out)>;

struct AdaptiveOptions {
    double absTol = 1e-8;   // target for the summed max-norm error
    int maxIntervals = 20000;
    int batch = 0;          // intervals refined per parallel round; 0 picks 4 per worker
};

struct QuadratureResult {
    Eigen::VectorXcd value;
    double errorEstimate = 0.0;
    int evaluations = 0;
    int intervals = 0;
    bool converged = true;
};

/// Locally adaptive Gauss-Kronrod (7/15) integration of a vector-valued
/// function over the partition given by breakpoints (at least two, increasing).
/// An interval is accepted once its max-norm Kronrod-Gauss difference is
/// below absTol times its share of the total length.
QuadratureResult integrateAdaptive(const VectorIntegrand& f, Eigen::Index dimension,
                                   const std::vector<double>& breakpoints, const AdaptiveOptions& opt = {});

/// Scalar convenience wrapper.
cplx integrateAdaptive(const std::function<cplx(double)>& f, const std::vector<double>& breakpoints,
                       const AdaptiveOptions& opt = {}, double* errorEstimate = nullptr);

/// Breakpoints on [lo, hi] refined geometrically (ratio 1/2) toward one end.
std::vector<double> gradedBreakpoints(double lo, double hi, bool towardHi, int levels);

/// Gauss-Legendre nodes and weights on [a, b].
void gaussLegendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace beamlab
