#include <doctest.h>

#include <cmath>
#include <numbers>

#include "beamlab/resolvent.hpp"
#include "oracles.hpp"

using namespace beamlab;

TEST_CASE("phase data invariants") {
    for (double mu : {1e-6, 1e-3, 0.1, 0.7, 1.0, std::sqrt(2.0), 1.9, 2.0 - 1e-6}) {
        const PhaseData p = phaseData(mu);
        CHECK(p.thetaPlus < 0.0);
        CHECK(p.thetaPlus > -std::numbers::pi);
        CHECK(std::abs(2.0 - 2.0 * std::cos(p.thetaPlus) - mu * mu) < 1e-13);
        CHECK(std::abs(std::cos(p.thetaTildePlus) - (mu * mu / 2.0 - 1.0)) < 1e-13);
        CHECK(p.a1 >= 1.0);
        CHECK(p.a2 < -1.0 / std::sqrt(2.0));
        CHECK(p.a2 > -1.0);
        CHECK(p.b < 0.0);
        CHECK(p.b == doctest::Approx(std::log(1.0 + mu * mu / 2.0 - mu * std::sqrt(1.0 + mu * mu / 4.0))).epsilon(1e-8));
    }
    const PhaseData small = phaseData(1e-4);
    CHECK(std::abs(small.thetaPlus / 1e-4 + 1.0) < 1e-3);
    CHECK(std::abs(small.b / 1e-4 + 1.0) < 1e-3);
    CHECK(phaseData(std::sqrt(2.0)).thetaPlus == doctest::Approx(-std::numbers::pi / 2));
    // thetaPlus + pi = 2 acos(mu / 2), about 2 sqrt(2 - mu) = 2e-3 here.
    CHECK(phaseData(2.0 - 1e-6).thetaPlus + std::numbers::pi == doctest::Approx(2e-3).epsilon(1e-6));
    CHECK_THROWS_AS(phaseData(0.0), Error);
    CHECK_THROWS_AS(phaseData(2.0), Error);
    CHECK_THROWS_AS(phaseData(-1.0), Error);
}

TEST_CASE("substitution parametrizations agree with the mu form") {
    for (double mu : {0.05, 0.9, 1.95}) {
        const PhaseData p = phaseData(mu);
        const PhaseData q = phaseDataFromThetaPlus(p.thetaPlus);
        const PhaseData r = phaseDataFromThetaTilde(p.thetaTildePlus);
        for (const PhaseData* x : {&q, &r}) {
            CHECK(x->mu == doctest::Approx(mu).epsilon(1e-13));
            CHECK(x->a1 == doctest::Approx(p.a1).epsilon(1e-12));
            CHECK(x->a2 == doctest::Approx(p.a2).epsilon(1e-12));
            CHECK(x->b == doctest::Approx(p.b).epsilon(1e-12));
        }
    }
}

TEST_CASE("kernel value at mu = sqrt 2") {
    const cplx k = freeResolventKernel(std::sqrt(2.0), Side::Plus, 0, 0);
    const cplx expected(-1.0 / (8.0 * std::sqrt(3.0)), 1.0 / 8.0);
    CHECK(std::abs(k - expected) < 1e-14);
}

TEST_CASE("closed form matches the partial-fraction oracle") {
    for (double mu : {0.05, 0.5, 1.0, 1.5, 1.97})
        for (long d : {0L, 1L, 2L, 7L, 30L}) {
            const cplx k = freeResolventKernel(mu, Side::Plus, d, 0);
            CHECK(std::abs(k - oracle::biLaplaceGreen(mu, d)) < 1e-9 * std::max(1.0, std::abs(k)));
        }
}

TEST_CASE("conjugation, translation invariance and the jump") {
    for (double mu : {0.3, 1.2}) {
        const PhaseData p = phaseData(mu);
        for (long n = -4; n <= 4; ++n)
            for (long m = -4; m <= 4; ++m) {
                const cplx kp = freeResolventKernel(mu, Side::Plus, n, m);
                const cplx km = freeResolventKernel(mu, Side::Minus, n, m);
                CHECK(km == std::conj(kp));
                CHECK(kp == freeResolventKernel(mu, Side::Plus, n + 3, m + 3));
                const double d = double(std::labs(n - m));
                const cplx jump = cplx(0.0, p.a1 / (2.0 * mu * mu * mu)) * std::cos(p.thetaPlus * d);
                CHECK(std::abs(kp - km - jump) < 1e-12 * std::abs(jump) + 1e-14);
            }
    }
}

TEST_CASE("resolvent identity (Delta^2 - mu^4) R0 delta_0 = delta_0") {
    const LatticeWindow w(200);
    for (double mu : {0.5, 1.0, 1.5}) {
        ComplexSequence col{w};
        for (long n = -200; n <= 200; ++n) col[n] = freeResolventKernel(mu, Side::Plus, n, 0);
        const auto lhs = applyBiLaplacian(col);
        double worst = 0.0;
        for (long n = -198; n <= 198; ++n)
            worst = std::max(worst, std::abs(lhs[n] - std::pow(mu, 4) * col[n] - (n == 0 ? 1.0 : 0.0)));
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("Laplacian resolvent") {
    // Off the spectrum: positive, symmetric, decaying; matches the root oracle.
    const double k0 = laplaceResolventKernel(cplx(-1.0, 0.0), 0).real();
    const double k1 = laplaceResolventKernel(cplx(-1.0, 0.0), 1).real();
    CHECK(k0 > 0.0);
    CHECK(k1 / k0 > 0.0);
    CHECK(k1 / k0 < 1.0);
    CHECK(laplaceResolventKernel(cplx(-1.0, 0.0), -3) == laplaceResolventKernel(cplx(-1.0, 0.0), 3));
    for (cplx om : {cplx(-1.0, 0.0), cplx(1.0, 0.5), cplx(5.0, 0.0), cplx(2.0, -1.0)})
        for (long d : {0L, 1L, 5L})
            CHECK(std::abs(laplaceResolventKernel(om, d) - oracle::laplaceGreen(om, d)) < 1e-12);
    CHECK_THROWS_AS(laplaceResolventKernel(cplx(2.0, 0.0), 0), Error);
    CHECK(laplaceResolventNegative(1.0, 2) == doctest::Approx(oracle::laplaceGreen(cplx(-1.0, 0.0), 2).real()));

    // Boundary values on the band against the root oracle.
    for (double mu : {0.2, 1.1, 1.8})
        for (long d : {0L, 3L}) {
            CHECK(std::abs(laplaceResolventLow(mu, Side::Plus, d) - oracle::laplaceGreen(cplx(mu * mu, 0.0), d, true)) < 1e-12);
            CHECK(std::abs(laplaceResolventLow(mu, Side::Minus, d) - oracle::laplaceGreen(cplx(mu * mu, 0.0), d, false)) <
                  1e-12);
            const cplx hi = oracle::laplaceGreen(cplx(4.0 - mu * mu, 0.0), d, true);
            CHECK(std::abs(laplaceResolventHigh(mu, Side::Plus, d) - hi) < 1e-12);
        }

    // |sin thetaTilde| = 1 at mu = sqrt 2.
    for (long d = 0; d < 6; ++d) CHECK(std::abs(laplaceResolventHigh(std::sqrt(2.0), Side::Minus, d)) == doctest::Approx(0.5));

    // J R^{+-}(mu^2) J = -R^{-+}(4 - mu^2).
    double worst = 0.0;
    for (long n = -50; n <= 50; ++n)
        for (long m = -50; m <= 50; ++m) {
            const double j = ((n + m) % 2 == 0) ? 1.0 : -1.0;
            worst = std::max(worst, std::abs(j * laplaceResolventLow(0.7, Side::Plus, n - m) +
                                             laplaceResolventHigh(0.7, Side::Minus, n - m)));
            worst = std::max(worst, std::abs(j * laplaceResolventLow(0.7, Side::Minus, n - m) +
                                             laplaceResolventHigh(0.7, Side::Plus, n - m)));
        }
    CHECK(worst < 1e-12);
}

TEST_CASE("cancellation coefficients") {
    const auto c = cancellationCoefficients(1e-3);
    CHECK(std::abs(c.c3 / 1e-9 + 1.0 / 3.0) < 1e-3);
    CHECK(c.b1 / 1e-3 == doctest::Approx(1.0).epsilon(1e-5));
    for (double mu : {0.01, 0.5, 1.5}) {
        const auto k = cancellationCoefficients(mu);
        CHECK(k.d3 == 2.0 * k.c3);
        CHECK(k.c1minus == -k.c1plus);
    }
    // c3 is odd in mu: the ratio c3 / mu^3 has no linear correction.
    const double r1 = cancellationCoefficients(1e-2).c3 / 1e-6, r2 = cancellationCoefficients(2e-2).c3 / 8e-6;
    CHECK(std::abs(r2 - r1) < 1e-3);
    CHECK_THROWS_AS(cancellationCoefficients(2.5), Error);
}

TEST_CASE("blow-up orders of the free resolvent on a fixed window") {
    const LatticeWindow w(3);
    std::vector<double> x, y;
    for (double mu : {1e-3, 2e-3, 4e-3, 1e-2}) {
        x.push_back(mu);
        y.push_back(freeResolventMatrix(mu, Side::Plus, w, w).entries.jacobiSvd().singularValues()(0));
    }
    CHECK(oracle::logSlope(x, y) == doctest::Approx(-3.0).epsilon(0.2 / 3.0));
    x.clear();
    y.clear();
    for (double e : {1e-6, 1e-5, 1e-4, 1e-3}) {
        x.push_back(e);
        y.push_back(freeResolventMatrix(2.0 - e, Side::Plus, w, w).entries.jacobiSvd().singularValues()(0));
    }
    CHECK(std::abs(oracle::logSlope(x, y) + 0.5) < 0.1);
}
