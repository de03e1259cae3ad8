#include <doctest.h>

#include <cmath>

#include "beamlab/mmatrix.hpp"
#include "oracles.hpp"

using namespace beamlab;

namespace {

Potential v1() { return Potential({{-2, -1.0}, {-1, 4.0}, {0, -3.0}, {1, 4.0}, {2, -1.0}}); }
Potential v2Compact() { return Potential({{-2, -1.0}, {-1, -4.0}, {0, 5.0}, {1, -4.0}, {2, -1.0}}); }

} // namespace

TEST_CASE("single-site M matrix") {
    const MMatrix M = buildM(Potential::delta(), std::sqrt(2.0));
    REQUIRE(M.entries.rows() == 1);
    const cplx expected(1.0 - 1.0 / (8.0 * std::sqrt(3.0)), 1.0 / 8.0);
    CHECK(std::abs(M.entries(0, 0) - expected) < 1e-14);
    const MInverse inv = invertM(M);
    CHECK(std::abs(inv.inverse(0, 0) - 1.0 / expected) < 1e-14);
}

TEST_CASE("M - U is complex symmetric and inversion is accurate") {
    const MMatrix M = buildM(v1(), 1.0);
    CHECK(M.entries.rows() == 5);
    CHECK((M.entries - M.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::isfinite(M.conditionNumber));
    const MInverse inv = invertM(M);
    CHECK(inv.residual < 1e-12);
    CHECK((M.entries * inv.inverse - Eigen::MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("near-threshold inversion of a second-kind resonance is refused") {
    CHECK_THROWS_AS(invertM(buildM(v1(), 1e-6)), Error);
    try {
        invertM(buildM(v1(), 1e-6));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NearSingular);
    }
}

TEST_CASE("perturbed resolvent: tiny potential gives the free kernel") {
    const LatticeWindow w(10);
    const ComplexKernel R = perturbedResolventKernel(Potential::delta(0, 1e-12), 0.8, Side::Plus, w);
    const ComplexKernel R0 = freeResolventMatrix(0.8, Side::Plus, w, w);
    CHECK((R.entries - R0.entries).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("perturbed resolvent: side conjugation") {
    const LatticeWindow w(8);
    const auto p = perturbedResolventKernel(v1(), 1.3, Side::Plus, w);
    const auto m = perturbedResolventKernel(v1(), 1.3, Side::Minus, w);
    CHECK((m.entries - p.entries.conjugate()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("perturbed resolvent solves (H - mu^4) R = I away from the window edge") {
    const LatticeWindow w(30);
    const double mu = 1.1;
    const auto R = perturbedResolventKernel(v1(), mu, Side::Plus, w);
    double worst = 0.0;
    for (long m = -5; m <= 5; ++m) {
        const auto h = applyH(v1(), R.column(m));
        for (long n = -28; n <= 28; ++n)
            worst = std::max(worst, std::abs(h[n] - std::pow(mu, 4) * R(n, m) - (n == m ? 1.0 : 0.0)));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("perturbed resolvent against a regularized truncated inverse") {
    // (H - mu^4 - i eps)^{-1} on a long Dirichlet chain; eps damps the
    // boundary reflections and costs O(eps) accuracy.
    const double mu = 1.0, eps = 1e-4;
    const long radius = 60, nPrime = 200000;
    const Potential V = v1();
    std::vector<std::pair<long, double>> entries(V.entries().begin(), V.entries().end());
    std::vector<long> cols;
    for (long m = -radius; m <= radius; m += 5) cols.push_back(m);
    const Eigen::MatrixXcd ref = oracle::truncatedResolvent(entries, mu, eps, nPrime, cols, radius);
    const auto R = perturbedResolventKernel(v1(), mu, Side::Plus, LatticeWindow(radius));
    Eigen::MatrixXcd ours(ref.rows(), ref.cols());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (long n = -radius; n <= radius; ++n) ours(n + radius, Eigen::Index(c)) = R(n, cols[c]);
    CHECK((ours - ref).norm() / ref.norm() < 2e-2);
}

TEST_CASE("blow-up probe exponents match the classification") {
    const auto grid = defaultProbeGrid(0.1);
    CHECK(grid.size() >= 13);
    // Regular with S0 != 0: M^{-1} tends to a nonzero limit.
    const Potential three({{-1, 1.0}, {0, 2.0}, {1, 1.0}});
    REQUIRE(classify(three, Threshold::Zero).classification == Classification::Regular);
    CHECK(std::abs(blowupProbe(three, Threshold::Zero, grid).fit.slope) < 0.15);
    // A single site has Q = 0, so M^{-1} = 1 / (1 + R0(0, 0)) vanishes like mu^3
    // instead of staying of order one; regularity shows as the absence of blow-up.
    const auto reg = blowupProbe(Potential::delta(), Threshold::Zero, grid);
    CHECK(reg.fit.slope > -0.15);
    CHECK(std::abs(reg.fit.slope - 3.0) < 0.05);
    const auto res = blowupProbe(v1(), Threshold::Zero, grid);
    CHECK(std::abs(res.fit.slope + 3.0) < 0.3);
    const auto six = blowupProbe(v2Compact(), Threshold::Sixteen, grid);
    CHECK(std::abs(six.fit.slope + 0.5) < 0.1);
    CHECK_THROWS_AS(blowupProbe(v1(), Threshold::Zero, {0.1, 0.01}), Error);
}

TEST_CASE("cancellation orders") {
    const auto grid = logGrid(1e-3, 1e-1, 17);
    CHECK(std::abs(cancellationOrderProbe(v1(), CancellationTarget::vQ, grid).fit.slope + 2.0) < 0.3);
    CHECK(std::abs(cancellationOrderProbe(v1(), CancellationTarget::vS0, grid).fit.slope + 1.0) < 0.3);
    CHECK(std::abs(cancellationOrderProbe(v1(), CancellationTarget::vS2, grid).fit.slope) < 0.3);
    CHECK(std::abs(cancellationOrderProbe(v2Compact(), CancellationTarget::SixteenVQt, grid).fit.slope) < 0.3);
    try {
        cancellationOrderProbe(Potential::delta(), CancellationTarget::vQ, grid);
        FAIL("expected EmptyProjection");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyProjection);
    }
}
