#include "beamlab/fit.hpp"

#include <cmath>

#include "beamlab/errors.hpp"

namespace beamlab {

LinearFit linearFit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::InvalidArgument, "fit needs at least two paired points");
    const double n = double(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw Error(ErrorCode::InvalidArgument, "fit abscissae are all equal");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.correlation = syy > 0 ? sxy / std::sqrt(sxx * syy) : 1.0;
    f.points = int(x.size());
    return f;
}

LinearFit logLogFit(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "log-log fit needs positive data");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    return linearFit(lx, ly);
}

std::vector<double> logGrid(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw Error(ErrorCode::InvalidArgument, "bad log grid");
    std::vector<double> g(static_cast<std::size_t>(n));
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) g[std::size_t(i)] = std::exp(a + (b - a) * i / (n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

} // namespace beamlab
