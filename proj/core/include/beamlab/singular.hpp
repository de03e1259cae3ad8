#pragma once

#include <cstdint>

#include "beamlab/lattice.hpp"

namespace beamlab {

/// Quintic smoothstep: 0 for s <= 1, 1 for s >= 2, C^2 at both ends.
double cutoffPhi(double s) noexcept;
double cutoffPhiDerivative(double s) noexcept;

enum class CZKernelId { K1Plus, K1Minus, K2Plus, K2Minus, KTilde1, KTilde2Plus, KTilde2Minus, SchurProbe };
const char* czKernelName(CZKernelId id) noexcept;

/// k1+-(n,m) = phi(||n| +- |m||^2) / (|n| +- |m|),  k2+-(n,m) = phi(||n| - |m||^2) / (|n| +- i|m|),
/// kt1(n,m) = phi(|n-m|^2) / (n - m),  kt2+-(n,m) = phi(|n-m|^2) / (n +- i m),
/// SchurProbe(n,m) = <|n| - |m|>^{-2}.
cplx czKernel(CZKernelId id, long n, long m) noexcept;
ComplexKernel czKernelMatrix(CZKernelId id, const LatticeWindow& w);

/// Max difference between k f and its reflected form over all f = delta_m,
/// rows and columns at the origin excluded. Only k1+-, k2+- are accepted.
double reflectionIdentityCheck(CZKernelId id, const LatticeWindow& w);

struct SchurResult {
    double rowSup = 0.0;
    double colSup = 0.0;
    bool passes = false;
};

SchurResult schurTest(const ComplexKernel& K, double bound);

struct NormEstimate {
    double estimate = 0.0;
    bool lowerBoundOnly = false;
    int iterations = 0;
};

/// l^p -> l^p norm of a kernel on its window. p = 1 and p = inf are the exact
/// column/row sums; p = 2 uses Lanczos on K^* K to relative accuracy 1e-8;
/// other p give a lower bound from random sign and sparse probes.
NormEstimate lpNormEstimate(const ComplexKernel& K, double p, int probes = 64, std::uint64_t seed = 1);
NormEstimate lpNormEstimate(CZKernelId id, double p, const LatticeWindow& w, int probes = 64, std::uint64_t seed = 1);

} // namespace beamlab
