#include "beamlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "beamlab/parallel.hpp"

namespace beamlab {

namespace {

struct Rule {
    std::array<double, 15> x{};  // nodes on [-1, 1]
    std::array<double, 15> wk{}; // Kronrod weights
    std::array<double, 15> wg{}; // Gauss weights (zero at Kronrod-only nodes)
};

const Rule& gk15() {
    static const Rule rule = [] {
        using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
        using G = boost::math::quadrature::gauss<double, 7>;
        const auto& ka = GK::abscissa();
        const auto& kw = GK::weights();
        const auto& gw = G::weights();
        Rule r;
        // Boost stores the non-negative half; even positions are the Gauss nodes.
        std::size_t k = 0;
        for (std::size_t i = 0; i < ka.size(); ++i) {
            const double g = (i % 2 == 0) ? gw[i / 2] : 0.0;
            r.x[k] = ka[i];
            r.wk[k] = kw[i];
            r.wg[k] = g;
            ++k;
            if (ka[i] != 0.0) {
                r.x[k] = -ka[i];
                r.wk[k] = kw[i];
                r.wg[k] = g;
                ++k;
            }
        }
        return r;
    }();
    return rule;
}

struct Interval {
    double a, b;
};

} // namespace

QuadratureResult integrateAdaptive(const VectorIntegrand& f, Eigen::Index dimension,
                                   const std::vector<double>& breakpoints, const AdaptiveOptions& opt) {
    if (breakpoints.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two breakpoints");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] > breakpoints[i - 1])) throw Error(ErrorCode::InvalidArgument, "breakpoints must increase");
    if (!(opt.absTol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");

    const Rule& rule = gk15();
    const double total = breakpoints.back() - breakpoints.front();
    const std::size_t batch = opt.batch > 0 ? std::size_t(opt.batch) : std::size_t(4 * std::max(1u, workerCount()));

    QuadratureResult res;
    res.value = Eigen::VectorXcd::Zero(dimension);
    std::vector<Interval> active;
    for (std::size_t i = 1; i < breakpoints.size(); ++i) active.push_back({breakpoints[i - 1], breakpoints[i]});
    res.intervals = int(active.size());
    std::mutex lock;

    while (!active.empty()) {
        const std::size_t take = std::min(batch, active.size());
        std::vector<Interval> work(active.end() - long(take), active.end());
        active.resize(active.size() - take);
        std::vector<char> accepted(take, 0);
        parallelFor(take, [&](std::size_t j) {
            const Interval iv = work[j];
            const double c = 0.5 * (iv.a + iv.b), h = 0.5 * (iv.b - iv.a);
            Eigen::VectorXcd kron = Eigen::VectorXcd::Zero(dimension);
            Eigen::VectorXcd gauss = Eigen::VectorXcd::Zero(dimension);
            Eigen::VectorXcd fx(dimension);
            for (std::size_t k = 0; k < 15; ++k) {
                fx.setZero();
                f(c + h * rule.x[k], fx);
                kron += rule.wk[k] * fx;
                if (rule.wg[k] != 0.0) gauss += rule.wg[k] * fx;
            }
            kron *= h;
            gauss *= h;
            const double err = dimension > 0 ? (kron - gauss).cwiseAbs().maxCoeff() : 0.0;
            const bool ok = err <= opt.absTol * (iv.b - iv.a) / total || !std::isfinite(err);
            const bool tooSmall = (iv.b - iv.a) <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(c));
            if (ok || tooSmall) {
                accepted[j] = 1;
                std::lock_guard<std::mutex> g(lock);
                res.value += kron;
                res.errorEstimate += err;
                if (!std::isfinite(err)) res.converged = false;
            }
        });
        res.evaluations += int(15 * take);
        for (std::size_t j = 0; j < take; ++j) {
            if (accepted[j]) continue;
            if (res.intervals >= opt.maxIntervals) {
                // Out of budget: accept the coarse estimate and flag it.
                const Interval iv = work[j];
                Eigen::VectorXcd fx(dimension), kron = Eigen::VectorXcd::Zero(dimension);
                const double c = 0.5 * (iv.a + iv.b), h = 0.5 * (iv.b - iv.a);
                for (std::size_t k = 0; k < 15; ++k) {
                    fx.setZero();
                    f(c + h * rule.x[k], fx);
                    kron += rule.wk[k] * fx;
                }
                res.value += h * kron;
                res.evaluations += 15;
                res.converged = false;
                continue;
            }
            const double mid = 0.5 * (work[j].a + work[j].b);
            active.push_back({work[j].a, mid});
            active.push_back({mid, work[j].b});
            ++res.intervals;
        }
    }
    if (!std::isfinite(res.errorEstimate) || res.errorEstimate > opt.absTol) res.converged = false;
    return res;
}

cplx integrateAdaptive(const std::function<cplx(double)>& f, const std::vector<double>& breakpoints,
                       const AdaptiveOptions& opt, double* errorEstimate) {
    AdaptiveOptions o = opt;
    o.batch = opt.batch > 0 ? opt.batch : 64;
    // Scalar integrands are cheap; keep them on the calling thread.
    const unsigned saved = workerCount();
    struct Restore {
        unsigned w;
        ~Restore() { setWorkerCount(w); }
    } restore{saved};
    setWorkerCount(1);
    const auto r = integrateAdaptive([&](double x, Eigen::VectorXcd& out) { out[0] = f(x); }, 1, breakpoints, o);
    if (errorEstimate) *errorEstimate = r.errorEstimate;
    if (!r.converged) throw Error(ErrorCode::QuadratureFailure, "scalar quadrature did not reach tolerance");
    return r.value[0];
}

std::vector<double> gradedBreakpoints(double lo, double hi, bool towardHi, int levels) {
    if (!(hi > lo) || levels < 0) throw Error(ErrorCode::InvalidArgument, "bad graded interval");
    std::vector<double> pts{lo, hi};
    const double len = hi - lo;
    for (int k = 1; k <= levels; ++k) {
        const double off = len * std::ldexp(1.0, -k);
        pts.push_back(towardHi ? hi - off : lo + off);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

void gaussLegendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one node");
    nodes.assign(std::size_t(n), 0.0);
    weights.assign(std::size_t(n), 0.0);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[std::size_t(i)] = c - h * x;
        nodes[std::size_t(n - 1 - i)] = c + h * x;
        weights[std::size_t(i)] = weights[std::size_t(n - 1 - i)] = h * w;
    }
}

} // namespace beamlab
