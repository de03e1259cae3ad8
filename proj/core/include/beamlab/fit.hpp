#pragma once

#include <vector>

namespace beamlab {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double correlation = 0.0;
    int points = 0;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit linearFit(const std::vector<double>& x, const std::vector<double>& y);
/// Fit of log y against log x.
LinearFit logLogFit(const std::vector<double>& x, const std::vector<double>& y);

/// n points spaced evenly in log between lo and hi, both included.
std::vector<double> logGrid(double lo, double hi, int n);

} // namespace beamlab
