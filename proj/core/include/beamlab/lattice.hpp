#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "beamlab/errors.hpp"

namespace beamlab {

using cplx = std::complex<double>;

/// Symmetric index range {-N, ..., N} hosting the truncation of the lattice.
class LatticeWindow {
public:
    explicit LatticeWindow(long radius = 0);

    long radius() const noexcept { return radius_; }
    long size() const noexcept { return 2 * radius_ + 1; }
    long offset(long n) const noexcept { return n + radius_; }
    long index(long k) const noexcept { return k - radius_; }
    bool contains(long n) const noexcept { return n >= -radius_ && n <= radius_; }
    bool interior(long n, long collar) const noexcept {
        return n >= -radius_ + collar && n <= radius_ - collar;
    }

    friend bool operator==(const LatticeWindow&, const LatticeWindow&) = default;

private:
    long radius_;
};

/// Finitely supported real potential, optionally on top of a constant
/// background value (the background is seen by applyH only).
class Potential {
public:
    Potential() = default;
    explicit Potential(std::map<long, double> entries, double background = 0.0);

    static Potential delta(long site = 0, double strength = 1.0);
    static Potential fromFile(const std::string& path);
    static Potential fromString(const std::string& text);

    const std::map<long, double>& entries() const noexcept { return entries_; }
    double background() const noexcept { return background_; }
    double operator()(long n) const noexcept;

    /// Sorted indices with V(n) != 0.
    std::vector<long> support() const;
    long supportRadius() const noexcept;
    bool isZero() const noexcept { return entries_.empty(); }
    double l1Norm() const noexcept;

    Potential translated(long k) const;
    Potential scaled(double factor) const;

    /// v = sqrt|V|, U = sign V and v_k(n) = n^k v(n) on the support.
    Eigen::VectorXd sqrtAbs() const;
    Eigen::VectorXd signs() const;
    Eigen::VectorXd moment(int k) const;
    /// Jv and J v_k on the support.
    Eigen::VectorXd alternatingSqrtAbs() const;
    Eigen::VectorXd alternatingMoment(int k) const;

private:
    std::map<long, double> entries_;
    double background_ = 0.0;
};

struct ComplexSequence {
    LatticeWindow window;
    Eigen::VectorXcd values;

    ComplexSequence() = default;
    explicit ComplexSequence(LatticeWindow w);
    ComplexSequence(LatticeWindow w, Eigen::VectorXcd v);

    /// Value at lattice index n, zero outside the window.
    cplx at(long n) const noexcept;
    cplx& operator[](long n) { return values[window.offset(n)]; }
    const cplx& operator[](long n) const { return values[window.offset(n)]; }
};

struct ComplexKernel {
    LatticeWindow rowWindow;
    LatticeWindow colWindow;
    Eigen::MatrixXcd entries;

    ComplexKernel() = default;
    ComplexKernel(LatticeWindow rows, LatticeWindow cols);
    ComplexKernel(LatticeWindow rows, LatticeWindow cols, Eigen::MatrixXcd k);

    cplx at(long n, long m) const noexcept;
    cplx& operator()(long n, long m) {
        return entries(rowWindow.offset(n), colWindow.offset(m));
    }
    const cplx& operator()(long n, long m) const {
        return entries(rowWindow.offset(n), colWindow.offset(m));
    }
    ComplexSequence column(long m) const;
    ComplexSequence apply(const ComplexSequence& f) const;
};

ComplexSequence delta(const LatticeWindow& w, long site = 0);

ComplexSequence applyLaplacian(const ComplexSequence& f);
ComplexSequence applyBiLaplacian(const ComplexSequence& f);
ComplexSequence applyH(const Potential& V, const ComplexSequence& f);

double symbolM(double x) noexcept;

ComplexSequence parityJ(const ComplexSequence& f);
/// Indicator of [-N', N'] on the given window (radius N' when omitted).
ComplexSequence charFn(long nPrime);
ComplexSequence charFn(long nPrime, const LatticeWindow& w);
/// l^{2,s} norm with weight <n> = (1+n^2)^{1/2}.
double weightedNorm(const ComplexSequence& f, double s);

/// Dense real matrix of H on a window (Dirichlet truncation).
Eigen::MatrixXd hamiltonianMatrix(const Potential& V, const LatticeWindow& w);

} // namespace beamlab
