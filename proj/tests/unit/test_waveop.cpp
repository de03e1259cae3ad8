#include <doctest.h>

#include <cmath>

#include "beamlab/waveop.hpp"
#include "oracles.hpp"

using namespace beamlab;

TEST_CASE("configuration validation") {
    QuadratureConfig c;
    CHECK_NOTHROW(validate(c));
    c.mu0 = 1.5;
    CHECK_THROWS_AS(validate(c), Error);
    c = {};
    c.absTol = -1.0;
    CHECK_THROWS_AS(validate(c), Error);
}

TEST_CASE("vanishing potential gives the identity at rate eps^(1/3)") {
    // M = 1 + eps R0 stops being close to 1 below mu ~ eps^(1/3), so W - I is
    // of that size rather than O(eps).
    QuadratureConfig cfg;
    cfg.muMin = 1e-6;
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(9, 9);
    std::vector<double> eps, dev;
    for (double e : {1e-6, 1e-8, 1e-10}) {
        const auto W = stationaryWaveOperator(Potential::delta(0, e), LatticeWindow(4), cfg);
        CHECK(W.diagnostics.bands.size() == 3);
        eps.push_back(e);
        dev.push_back((W.kernel.entries - I).cwiseAbs().maxCoeff());
    }
    CHECK(dev.back() < 2e-4);
    CHECK(std::abs(oracle::logSlope(eps, dev) - 1.0 / 3.0) < 0.05);
}

TEST_CASE("kernel, application and adjoint are consistent") {
    const Potential V = Potential::delta();
    const LatticeWindow w(6);
    const auto W = stationaryWaveOperator(V, w);
    for (long m : {-3L, 0L, 5L}) {
        const auto col = applyWaveOperator(V, delta(w, m), w);
        CHECK((col.values - W.kernel.column(m).values).cwiseAbs().maxCoeff() < 1e-6);
    }
    ComplexSequence g{w};
    for (long n = -6; n <= 6; ++n) g[n] = cplx(std::cos(n), 0.3 * n);
    const auto Wstar = applyWaveOperatorAdjoint(V, g, w);
    const Eigen::VectorXcd direct = W.kernel.entries.adjoint() * g.values;
    CHECK((Wstar.values - direct).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(std::abs(W.kernel(0, 0) - cplx(0.758693, -0.270516)) < 1e-5);
}

TEST_CASE("minus operator is the conjugate of the plus operator") {
    const Potential V({{0, 1.0}, {1, -0.5}});
    const auto Wp = stationaryWaveOperator(V, LatticeWindow(5), {}, Side::Plus);
    const auto Wm = stationaryWaveOperator(V, LatticeWindow(5), {}, Side::Minus);
    CHECK((Wm.kernel.entries - Wp.kernel.entries.conjugate()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("refining the quadrature moves entries by less than 1e-3") {
    const Potential V = Potential::delta();
    QuadratureConfig fine;
    fine.absTol = 1e-9;
    fine.gradingLevels = 16;
    fine.midPanels = 32;
    const auto a = stationaryWaveOperator(V, LatticeWindow(5));
    const auto b = stationaryWaveOperator(V, LatticeWindow(5), fine);
    CHECK((a.kernel.entries - b.kernel.entries).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("near-isometry on a delta and columns bounded in l2") {
    const Potential V = Potential::delta();
    const auto Wf = applyWaveOperator(V, delta(LatticeWindow(64)), LatticeWindow(1024));
    const double ratio = Wf.values.norm();
    CHECK(ratio > 0.98);
    CHECK(ratio < 1.02);
    const auto W = stationaryWaveOperator(V, LatticeWindow(10));
    CHECK(W.kernel.entries.colwise().norm().maxCoeff() < 1.02);
}

TEST_CASE("adjoint annihilates a bound state") {
    const Potential V = Potential::delta(0, -30.0);
    const LatticeWindow w(40);
    // Bound state of a single-site well: u(n) ~ r^{|n|} with r + 1/r + ... solved numerically.
    const Eigen::MatrixXd H = hamiltonianMatrix(V, w);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    REQUIRE(es.eigenvalues()(0) < 0.0);
    ComplexSequence u{w};
    u.values = es.eigenvectors().col(0).cast<cplx>();
    const auto Wu = applyWaveOperatorAdjoint(V, u, LatticeWindow(20));
    CHECK(Wu.values.norm() < 1e-3);
}

TEST_CASE("harmonic reference sum") {
    CHECK(std::abs(harmonicReference(1) - (cplx(-1.0, 1.0) * 13.0 / 48.0 + 5.0 / 24.0)) < 1e-14);
    for (long N : {2L, 7L, 50L}) CHECK(std::abs(harmonicReference(N) - oracle::harmonicSum(N)) < 1e-13);
}

TEST_CASE("growth table shape") {
    const auto t = endpointGrowthExperiment(Potential::delta(), {4, 8, 12}, 3);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.probeOffset == 3);
    for (const auto& r : t.rows) {
        CHECK(r.l2Ratio > 0.9);
        CHECK(r.l2Ratio < 1.1);
        CHECK(r.supNorm >= std::abs(r.valueAtProbe));
    }
    CHECK_THROWS_AS(endpointGrowthExperiment(Potential::delta(), {8, 16}, 2), Error);
}

TEST_CASE("time-dependent oracle") {
    const LatticeWindow w(16);
    WaveOracleOptions opt;
    opt.checkConvergence = false;
    const auto free = timeDependentWaveOracle(Potential(), delta(w, 2), 20.0, opt);
    CHECK((free.value.values - delta(w, 2).values).cwiseAbs().maxCoeff() < 1e-10);

    opt.checkConvergence = true;
    opt.tolerance = 1e-6;
    CHECK_THROWS_AS(timeDependentWaveOracle(Potential::delta(), delta(w), 20.0, opt), Error);
}

TEST_CASE("intertwining in the trivial limit") {
    const auto r = intertwiningCheck(Potential::delta(0, 1e-10), 0.0, LatticeWindow(16));
    CHECK(r.discrepancy < 1e-3);
}
