#include "beamlab/dispersive.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include <boost/math/differentiation/autodiff.hpp>
#include <fftw3.h>

#include "beamlab/parallel.hpp"
#include "beamlab/quadrature.hpp"

namespace beamlab {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);
std::mutex fftwPlanner;

std::size_t fftLength(double span) {
    std::size_t L = 64;
    while (double(L) < span) L *= 2;
    return L;
}

/// In-place periodic convolution with the multiplier on an array of length L.
void applyMultiplier(std::vector<cplx>& data, const std::function<cplx(double)>& m) {
    const int L = int(data.size());
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan fwd, bwd;
    {
        std::lock_guard<std::mutex> g(fftwPlanner);
        fwd = fftw_plan_dft_1d(L, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(L, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(fwd);
    for (int k = 0; k < L; ++k) data[std::size_t(k)] *= m(2.0 * kPi * k / L) / double(L);
    fftw_execute(bwd);
    std::lock_guard<std::mutex> g(fftwPlanner);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
}

double beamReach(double t) { return 2.0 * std::abs(t) + 20.0 * std::cbrt(std::abs(t)) + 64.0; }

cplx beamMultiplier(double a, double t, double theta) {
    return std::exp(-I * t * std::sqrt(symbolM(theta) + a * a));
}

void requireTimes(const std::vector<double>& tGrid, double decades) {
    if (tGrid.size() < 8) throw Error(ErrorCode::InvalidArgument, "decay fit needs at least 8 times");
    for (std::size_t i = 0; i < tGrid.size(); ++i) {
        if (!(tGrid[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "times must be positive");
        if (i > 0 && !(tGrid[i] > tGrid[i - 1])) throw Error(ErrorCode::InvalidArgument, "times must increase");
    }
    if (tGrid.back() < tGrid.front() * std::pow(10.0, decades) * (1.0 - 1e-12))
        throw Error(ErrorCode::InvalidArgument, "time grid spans too few decades");
}

/// Zeros of f on [lo, hi] located by sampling and bisection.
std::vector<double> zerosOf(const std::function<double(double)>& f, double lo, double hi, int samples) {
    std::vector<double> z;
    double x0 = lo, f0 = f(lo);
    if (f0 == 0.0) z.push_back(lo);
    for (int i = 1; i <= samples; ++i) {
        const double x1 = lo + (hi - lo) * i / samples;
        const double f1 = f(x1);
        if (f1 == 0.0) {
            z.push_back(x1);
        } else if (f0 != 0.0 && (f0 < 0.0) != (f1 < 0.0)) {
            double l = x0, h = x1, fl = f0;
            for (int it = 0; it < 200 && h - l > 1e-15 * std::max(1.0, std::abs(l)); ++it) {
                const double m = 0.5 * (l + h);
                const double fm = f(m);
                if ((fm < 0.0) == (fl < 0.0)) {
                    l = m;
                    fl = fm;
                } else {
                    h = m;
                }
            }
            z.push_back(0.5 * (l + h));
        }
        x0 = x1;
        f0 = f1;
    }
    return z;
}

} // namespace

double BeamPhase::value(double theta) const { return std::sqrt(symbolM(theta) + a * a) - s * theta; }

double BeamPhase::derivative(double theta, int k) const {
    if (k < 0 || k > 4) throw Error(ErrorCode::InvalidArgument, "derivative order must be 0..4");
    if (k == 0) return value(theta);
    const double lin = k == 1 ? s : 0.0;
    if (a == 0.0) {
        // sqrt(M) = 2 - 2 cos theta exactly.
        const double d[4] = {2.0 * std::sin(theta), 2.0 * std::cos(theta), -2.0 * std::sin(theta), -2.0 * std::cos(theta)};
        return d[k - 1] - lin;
    }
    using namespace boost::math::differentiation;
    const auto x = make_fvar<double, 4>(theta);
    const auto u = 2.0 - 2.0 * cos(x);
    const auto g = sqrt(u * u + a * a);
    return g.derivative(std::size_t(k)) - lin;
}

cplx freeBeamKernel(double a, double t, long d, double absTol) {
    if (!std::isfinite(t) || !std::isfinite(a)) throw Error(ErrorCode::InvalidArgument, "a and t must be finite");
    if (t == 0.0) return d == 0 ? cplx(1.0) : cplx(0.0);
    const double ad = double(std::labs(d));
    const BeamPhase ph{a, 0.0};
    // Stationary points of t Phi(theta) -/+ d theta on [0, pi].
    std::vector<double> bp{0.0, kPi};
    for (double c : {ad / t, -ad / t}) {
        const auto z = zerosOf([&](double th) { return ph.derivative(th, 1) - c; }, 0.0, kPi, 2048);
        bp.insert(bp.end(), z.begin(), z.end());
    }
    if (a != 0.0) {
        const double th0 = std::acos(cubicRootX0(a));
        bp.push_back(th0);
    }
    // About two panels per oscillation.
    const int panels = int(std::ceil((2.0 * std::abs(t) + ad) + 1.0));
    for (int i = 1; i < panels; ++i) bp.push_back(kPi * i / panels);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end(), [](double x, double y) { return std::abs(x - y) < 1e-14; }), bp.end());

    AdaptiveOptions opt;
    opt.absTol = absTol * kPi;
    opt.maxIntervals = 4 * panels + 200000;
    const auto f = [&](double th) { return beamMultiplier(a, t, th) * std::cos(ad * th); };
    return integrateAdaptive(f, bp, opt) / kPi;
}

std::vector<cplx> freeBeamKernelFFT(double a, double t, long radius) {
    if (radius < 0) throw Error(ErrorCode::InvalidArgument, "radius must be non-negative");
    const std::size_t L = fftLength(2.0 * (double(radius) + beamReach(t)));
    std::vector<cplx> data(L, cplx(0.0));
    data[0] = 1.0;
    applyMultiplier(data, [&](double th) { return beamMultiplier(a, t, th); });
    std::vector<cplx> k(std::size_t(2 * radius + 1));
    for (long d = -radius; d <= radius; ++d) k[std::size_t(d + radius)] = data[std::size_t((d + long(L)) % long(L))];
    return k;
}

ComplexSequence propagateSymbol(const ComplexSequence& f, const std::function<cplx(double)>& multiplier,
                                const LatticeWindow& out, double reach) {
    const long fr = f.window.radius();
    const std::size_t L = fftLength(2.0 * (double(fr + out.radius()) + reach) + 64.0);
    const long Ll = long(L);
    std::vector<cplx> data(L, cplx(0.0));
    for (long m = -fr; m <= fr; ++m) data[std::size_t((m + Ll) % Ll)] = f[m];
    applyMultiplier(data, multiplier);
    ComplexSequence r(out);
    for (long n = -out.radius(); n <= out.radius(); ++n) r[n] = data[std::size_t(((n % Ll) + Ll) % Ll)];
    return r;
}

ComplexSequence freePropagate(const ComplexSequence& f, double t, const LatticeWindow& out) {
    const double reach = kBiLaplacianMaxSpeed * std::abs(t) + 40.0 * std::cbrt(std::abs(t)) + 64.0;
    return propagateSymbol(f, [t](double th) { return std::exp(-I * t * symbolM(th)); }, out, reach);
}

DecayFit decayFit(double a, const std::vector<double>& tGrid) {
    requireTimes(tGrid, 2.0);
    DecayFit r;
    r.times = tGrid;
    r.supNorms.assign(tGrid.size(), 0.0);
    parallelFor(tGrid.size(), [&](std::size_t i) {
        const auto k = freeBeamKernelFFT(a, tGrid[i], long(std::ceil(3.0 * tGrid[i])));
        double m = 0.0;
        for (const auto& z : k) m = std::max(m, std::abs(z));
        r.supNorms[i] = m;
    });
    r.fit = logLogFit(r.times, r.supNorms);
    return r;
}

double cubicH(double a, double x) noexcept {
    return 4.0 * x * x * x - 8.0 * x * x + (2.0 * a * a + 4.0) * x + a * a;
}

std::vector<double> cubicRealRoots(double a, double lo, double hi) {
    // Split at the critical points of h_a so each piece is monotone.
    std::vector<double> cuts{lo, hi};
    const double A = 12.0, B = -16.0, C = 2.0 * a * a + 4.0;
    const double disc = B * B - 4.0 * A * C;
    std::vector<double> crit;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        crit = {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)};
        for (double c : crit)
            if (c > lo && c < hi) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> roots;
    const auto h = [a](double x) { return cubicH(a, x); };
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const auto z = zerosOf(h, cuts[i - 1], cuts[i], 1);
        roots.insert(roots.end(), z.begin(), z.end());
    }
    // A double root sits at a critical point without a sign change.
    for (double c : crit)
        if (c >= lo && c <= hi && std::abs(h(c)) < 1e-13) roots.push_back(c);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(), [](double x, double y) { return std::abs(x - y) < 1e-12; }),
                roots.end());
    return roots;
}

double cubicRootX0(double a) {
    if (a == 0.0) throw Error(ErrorCode::NoRoot, "h_0 has no root in (-1, 0)");
    // h_a(-1) = -a^2 - 16 < 0 < a^2 = h_a(0)
    double lo = -1.0, hi = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double m = 0.5 * (lo + hi);
        (cubicH(a, m) < 0.0 ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
}

StationaryAnalysis stationaryAnalysis(double a, double s) {
    StationaryAnalysis r;
    r.a = a;
    r.s = s;
    const BeamPhase ph{a, s};
    const auto inflection = [&](double th) {
        return InflectionPoint{th, ph.derivative(th, 2), ph.derivative(th, 3), ph.derivative(th, 4)};
    };
    r.inflections.push_back(inflection(0.0));
    if (a != 0.0) {
        r.hasTheta0 = true;
        r.x0 = cubicRootX0(a);
        r.hAtX0 = cubicH(a, r.x0);
        r.theta0 = -std::acos(r.x0);
        const double c = std::cos(r.theta0);
        const double u = 2.0 - 2.0 * c;
        r.s0 = 4.0 / std::sqrt(u * u + a * a) * (1.0 - c) * std::sin(r.theta0);
        r.inflections.push_back(inflection(r.theta0));
    } else {
        // Phi'' = 2 cos theta vanishes at -pi/2 when a = 0.
        r.inflections.push_back(inflection(-kPi / 2.0));
    }
    r.stationaryPoints = zerosOf([&](double th) { return ph.derivative(th, 1); }, -kPi, 0.0, 4096);
    return r;
}

namespace {

cplx cosG(double lam, double a, double t) { return std::cos(t * std::sqrt(cplx(lam + a * a))); }

cplx sincG(double lam, double a, double t) {
    const cplx w = t * std::sqrt(cplx(lam + a * a));
    return std::abs(w) < 1e-8 ? 1.0 - w * w / 6.0 : std::sin(w) / w;
}

} // namespace

PerturbedPropagators perturbedPropagators(const Potential& V, double a, double t, const LatticeWindow& window,
                                          const AcPolicy& policy, const TruncatedSpectrum* spectrum) {
    TruncatedSpectrum own;
    if (!spectrum) {
        own = truncatedSpectrum(V, LatticeWindow(window.radius() + long(std::ceil(2.2 * std::abs(t))) + 64));
        spectrum = &own;
    }
    const AcSelection sel = selectAc(*spectrum, V, policy);
    PerturbedPropagators r;
    r.cosKernel = spectralKernel(*spectrum, sel, [&](double l) { return cosG(l, a, t); }, window, window);
    r.sincKernel = spectralKernel(*spectrum, sel, [&](double l) { return sincG(l, a, t); }, window, window);
    for (auto k : sel.retained) r.retainedValues.push_back(spectrum->values[k]);
    r.droppedValues = sel.droppedValues;
    return r;
}

DecayFit perturbedDecayFit(const Potential& V, double a, const std::vector<double>& tGrid, const AcPolicy& policy) {
    requireTimes(tGrid, 1.0);
    const long R = V.isZero() ? 0 : V.supportRadius();
    const TruncatedSpectrum spec = truncatedSpectrum(V, LatticeWindow(long(std::ceil(2.2 * tGrid.back())) + 64 + R));
    const AcSelection sel = selectAc(spec, V, policy);
    const LatticeWindow cols(R + 8);
    Eigen::MatrixXd U(spec.window.size(), Eigen::Index(sel.retained.size()));
    Eigen::VectorXd lam(Eigen::Index(sel.retained.size()));
    for (std::size_t j = 0; j < sel.retained.size(); ++j) {
        U.col(Eigen::Index(j)) = spec.vectors.col(sel.retained[j]);
        lam[Eigen::Index(j)] = spec.values[sel.retained[j]];
    }
    const Eigen::MatrixXd Uc = U.middleRows(spec.window.offset(-cols.radius()), cols.size());
    DecayFit r;
    r.times = tGrid;
    r.supNorms.assign(tGrid.size(), 0.0);
    parallelFor(tGrid.size(), [&](std::size_t i) {
        Eigen::VectorXd g(lam.size());
        for (Eigen::Index k = 0; k < lam.size(); ++k) g[k] = cosG(lam[k], a, tGrid[i]).real();
        const Eigen::MatrixXd K = U * (g.asDiagonal() * Uc.transpose());
        r.supNorms[i] = K.cwiseAbs().maxCoeff();
    });
    r.fit = logLogFit(r.times, r.supNorms);
    return r;
}

} // namespace beamlab
