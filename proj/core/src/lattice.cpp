#include "beamlab/lattice.hpp"

#include <cmath>
#include <cstdlib>

namespace beamlab {

const char* errorName(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DegeneratePotential: return "DegeneratePotential";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::NearSingular: return "NearSingular";
    case ErrorCode::EmptyProjection: return "EmptyProjection";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

LatticeWindow::LatticeWindow(long radius) : radius_(radius) {
    if (radius < 0) throw Error(ErrorCode::InvalidArgument, "window radius must be non-negative");
}

Potential::Potential(std::map<long, double> entries, double background) : background_(background) {
    if (!std::isfinite(background)) throw Error(ErrorCode::InvalidArgument, "background must be finite");
    for (auto [n, value] : entries) {
        if (!std::isfinite(value)) throw Error(ErrorCode::InvalidArgument, "potential values must be finite");
        if (value != 0.0) entries_.emplace(n, value);
    }
}

Potential Potential::delta(long site, double strength) { return Potential({{site, strength}}); }

double Potential::operator()(long n) const noexcept {
    auto it = entries_.find(n);
    return background_ + (it == entries_.end() ? 0.0 : it->second);
}

std::vector<long> Potential::support() const {
    std::vector<long> s;
    s.reserve(entries_.size());
    for (const auto& e : entries_) s.push_back(e.first);
    return s;
}

long Potential::supportRadius() const noexcept {
    long r = 0;
    for (const auto& e : entries_) r = std::max(r, std::labs(e.first));
    return r;
}

double Potential::l1Norm() const noexcept {
    double s = 0.0;
    for (const auto& e : entries_) s += std::abs(e.second);
    return s;
}

Potential Potential::translated(long k) const {
    std::map<long, double> out;
    for (const auto& e : entries_) out.emplace(e.first + k, e.second);
    return Potential(std::move(out), background_);
}

Potential Potential::scaled(double factor) const {
    std::map<long, double> out;
    for (const auto& e : entries_) out.emplace(e.first, e.second * factor);
    return Potential(std::move(out), background_ * factor);
}

Eigen::VectorXd Potential::sqrtAbs() const { return moment(0); }

Eigen::VectorXd Potential::signs() const {
    Eigen::VectorXd u(entries_.size());
    Eigen::Index i = 0;
    for (const auto& e : entries_) u[i++] = e.second > 0 ? 1.0 : -1.0;
    return u;
}

Eigen::VectorXd Potential::moment(int k) const {
    Eigen::VectorXd v(entries_.size());
    Eigen::Index i = 0;
    for (const auto& e : entries_) v[i++] = std::pow(double(e.first), k) * std::sqrt(std::abs(e.second));
    return v;
}

Eigen::VectorXd Potential::alternatingSqrtAbs() const { return alternatingMoment(0); }

Eigen::VectorXd Potential::alternatingMoment(int k) const {
    Eigen::VectorXd v = moment(k);
    Eigen::Index i = 0;
    for (const auto& e : entries_) {
        if (e.first % 2 != 0) v[i] = -v[i];
        ++i;
    }
    return v;
}

ComplexSequence::ComplexSequence(LatticeWindow w) : window(w), values(Eigen::VectorXcd::Zero(w.size())) {}

ComplexSequence::ComplexSequence(LatticeWindow w, Eigen::VectorXcd v) : window(w), values(std::move(v)) {
    if (values.size() != window.size())
        throw Error(ErrorCode::InvalidArgument, "sequence length does not match its window");
}

cplx ComplexSequence::at(long n) const noexcept {
    return window.contains(n) ? values[window.offset(n)] : cplx(0.0);
}

ComplexKernel::ComplexKernel(LatticeWindow rows, LatticeWindow cols)
    : rowWindow(rows), colWindow(cols), entries(Eigen::MatrixXcd::Zero(rows.size(), cols.size())) {}

ComplexKernel::ComplexKernel(LatticeWindow rows, LatticeWindow cols, Eigen::MatrixXcd k)
    : rowWindow(rows), colWindow(cols), entries(std::move(k)) {
    if (entries.rows() != rows.size() || entries.cols() != cols.size())
        throw Error(ErrorCode::InvalidArgument, "kernel dimensions do not match its windows");
}

cplx ComplexKernel::at(long n, long m) const noexcept {
    if (!rowWindow.contains(n) || !colWindow.contains(m)) return 0.0;
    return entries(rowWindow.offset(n), colWindow.offset(m));
}

ComplexSequence ComplexKernel::column(long m) const {
    return ComplexSequence(rowWindow, entries.col(colWindow.offset(m)));
}

ComplexSequence ComplexKernel::apply(const ComplexSequence& f) const {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(colWindow.size());
    for (long m = -colWindow.radius(); m <= colWindow.radius(); ++m) x[colWindow.offset(m)] = f.at(m);
    return ComplexSequence(rowWindow, entries * x);
}

ComplexSequence delta(const LatticeWindow& w, long site) {
    ComplexSequence f(w);
    if (w.contains(site)) f[site] = 1.0;
    return f;
}

ComplexSequence applyLaplacian(const ComplexSequence& f) {
    ComplexSequence g(f.window);
    for (long n = -f.window.radius(); n <= f.window.radius(); ++n)
        g[n] = f.at(n + 1) + f.at(n - 1) - 2.0 * f.at(n);
    return g;
}

ComplexSequence applyBiLaplacian(const ComplexSequence& f) {
    ComplexSequence g(f.window);
    for (long n = -f.window.radius(); n <= f.window.radius(); ++n)
        g[n] = f.at(n + 2) - 4.0 * f.at(n + 1) + 6.0 * f.at(n) - 4.0 * f.at(n - 1) + f.at(n - 2);
    return g;
}

ComplexSequence applyH(const Potential& V, const ComplexSequence& f) {
    ComplexSequence g = applyBiLaplacian(f);
    for (long n = -f.window.radius(); n <= f.window.radius(); ++n) g[n] += V(n) * f[n];
    return g;
}

double symbolM(double x) noexcept {
    double s = 2.0 - 2.0 * std::cos(x);
    return s * s;
}

ComplexSequence parityJ(const ComplexSequence& f) {
    ComplexSequence g = f;
    for (long n = -f.window.radius(); n <= f.window.radius(); ++n)
        if (n % 2 != 0) g[n] = -g[n];
    return g;
}

ComplexSequence charFn(long nPrime) { return charFn(nPrime, LatticeWindow(nPrime)); }

ComplexSequence charFn(long nPrime, const LatticeWindow& w) {
    ComplexSequence f(w);
    for (long n = -std::min(nPrime, w.radius()); n <= std::min(nPrime, w.radius()); ++n) f[n] = 1.0;
    return f;
}

double weightedNorm(const ComplexSequence& f, double s) {
    double acc = 0.0;
    for (long n = -f.window.radius(); n <= f.window.radius(); ++n) {
        double w = std::pow(1.0 + double(n) * double(n), s);
        acc += w * std::norm(f[n]);
    }
    return std::sqrt(acc);
}

Eigen::MatrixXd hamiltonianMatrix(const Potential& V, const LatticeWindow& w) {
    const long L = w.size();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(L, L);
    static constexpr double stencil[5] = {1.0, -4.0, 6.0, -4.0, 1.0};
    for (long i = 0; i < L; ++i) {
        for (long k = -2; k <= 2; ++k) {
            long j = i + k;
            if (j >= 0 && j < L) A(i, j) = stencil[k + 2];
        }
        A(i, i) += V(w.index(i));
    }
    return A;
}

} // namespace beamlab
