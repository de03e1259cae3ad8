#include <doctest.h>

#include <cmath>

#include "beamlab/threshold.hpp"
#include "oracles.hpp"

using namespace beamlab;

namespace {

Potential v1() { return Potential({{-2, -1.0}, {-1, 4.0}, {0, -3.0}, {1, 4.0}, {2, -1.0}}); }
Potential v2Compact() { return Potential({{-2, -1.0}, {-1, -4.0}, {0, 5.0}, {1, -4.0}, {2, -1.0}}); }

const ThresholdKernelId kAll[] = {ThresholdKernelId::Gm1, ThresholdKernelId::G0, ThresholdKernelId::G1,
                                  ThresholdKernelId::G3,  ThresholdKernelId::Gt0, ThresholdKernelId::Gt1,
                                  ThresholdKernelId::Gt2};

double maxAbs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

} // namespace

TEST_CASE("closed-form kernel values") {
    CHECK(thresholdKernelValue(ThresholdKernelId::G0, 0) == 0.0);
    CHECK(thresholdKernelValue(ThresholdKernelId::G0, 1) == 0.0);
    CHECK(thresholdKernelValue(ThresholdKernelId::G0, 2) == doctest::Approx(0.5));
    CHECK(thresholdKernelValue(ThresholdKernelId::Gt1, 0) == doctest::Approx(-13.0 / 8.0));
    CHECK(thresholdKernelValue(ThresholdKernelId::Gm1, 3) == doctest::Approx(0.125 - 4.5));
}

TEST_CASE("kernels are symmetric") {
    for (auto id : kAll) {
        const ComplexKernel K = thresholdKernel(id, LatticeWindow(6));
        CHECK((K.entries - K.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("G0 and G-1 reproduce the small-mu expansion of the free resolvent") {
    // R0^+(mu^4) = (i - 1)/(4 mu^3) + (1 + i) G-1/(4 mu) + G0 + O(mu), with the
    // resolvent evaluated independently through partial fractions.
    // One Richardson step removes the O(mu) remainder.
    auto remainder = [](double mu, long d) {
        const cplx lead = cplx(-1.0, 1.0) / (4.0 * mu * mu * mu);
        const cplx next = cplx(1.0, 1.0) * thresholdKernelValue(ThresholdKernelId::Gm1, d) / (4.0 * mu);
        return oracle::biLaplaceGreen(mu, d) - lead - next;
    };
    for (long d = 0; d <= 4; ++d) {
        const cplx g0 = 2.0 * remainder(5e-3, d) - remainder(1e-2, d);
        CHECK(std::abs(g0 - thresholdKernelValue(ThresholdKernelId::G0, d)) < 1e-3);
    }
}

TEST_CASE("fundamental solutions") {
    CHECK(checkFundamentalSolution(ThresholdKernelId::G0, LatticeWindow(20)) < 1e-12);
    CHECK(checkFundamentalSolution(ThresholdKernelId::Gt0, LatticeWindow(20)) < 1e-10);
    CHECK_THROWS_AS(checkFundamentalSolution(ThresholdKernelId::G1, LatticeWindow(20)), Error);
    CHECK_THROWS_AS(checkFundamentalSolution(ThresholdKernelId::G0, LatticeWindow(4)), Error);
}

TEST_CASE("zero chain: projector algebra and orthogonality") {
    for (const Potential& V : {v1(), v2Compact(), Potential({{-1, 3.0}, {0, 7.0}, {2, 11.0}})}) {
        const auto c = buildZeroChain(V);
        const Eigen::Index k = Eigen::Index(c.support.size());
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(k, k);
        CHECK(maxAbs(c.P * c.P - c.P) < 1e-12);
        CHECK(maxAbs(c.Q * c.Q - c.Q) < 1e-12);
        CHECK(maxAbs(c.P + c.Q - I) < 1e-12);
        CHECK((c.Q * c.v).norm() < 1e-12);
        const Eigen::MatrixXd* S[] = {&c.S0, &c.S1, &c.S2, &c.S3};
        for (int j = 0; j < 4; ++j) {
            CHECK(maxAbs(*S[j] * *S[j] - *S[j]) < 1e-12);
            CHECK(maxAbs(*S[j] * c.Q - *S[j]) < 1e-12);
            for (int l = j + 1; l < 4; ++l) CHECK(maxAbs(*S[j] * *S[l] - *S[l]) < 1e-12);
        }
        CHECK((c.S0 * V.moment(0)).norm() < 1e-12);
        CHECK((c.S0 * V.moment(1)).norm() < 1e-12);
        // D0 inverts QvG-1vQ + S0 on the range of Q.
        CHECK(maxAbs(c.Q * (c.vGm1v + c.S0) * c.D0 * c.Q - c.Q) < 1e-10);
    }
}

TEST_CASE("sixteen chain: projector algebra and orthogonality") {
    for (const Potential& V : {v1(), v2Compact()}) {
        const auto c = buildSixteenChain(V);
        CHECK(maxAbs(c.Pt * c.Pt - c.Pt) < 1e-12);
        CHECK((c.Qt * c.vt).norm() < 1e-12);
        CHECK((c.St0 * c.vt).norm() < 1e-12);
        CHECK(maxAbs(c.St1 * c.St0 - c.St1) < 1e-12);
        CHECK(maxAbs(c.St2 * c.St1 - c.St2) < 1e-12);
    }
}

TEST_CASE("single site is regular at both thresholds") {
    const Potential d = Potential::delta();
    const auto z = buildZeroChain(d);
    CHECK(z.basisS0.cols() == 0);
    CHECK(classify(d, Threshold::Zero).classification == Classification::Regular);
    CHECK(classify(d, Threshold::Sixteen).classification == Classification::Regular);
    CHECK_FALSE(classify(d, Threshold::Zero).phi.has_value());
}

TEST_CASE("resonance example at zero is of the second kind") {
    const auto z = buildZeroChain(v1());
    CHECK(z.basisS2.cols() > 0);
    const auto r = classify(v1(), Threshold::Zero);
    CHECK(r.classification == Classification::SecondKindResonance);
    REQUIRE(r.phi.has_value());
    CHECK(r.residualSup < 1e-9);
    CHECK(r.orthogonalityResidual < 1e-10);
    CHECK(r.recoveryResidual < 1e-10);
    // phi is proportional to 1 + delta_0.
    const auto& phi = *r.phi;
    const cplx c = phi[7];
    for (long n = -phi.window.radius(); n <= phi.window.radius(); ++n)
        CHECK(std::abs(phi[n] - c * (n == 0 ? 2.0 : 1.0)) < 1e-9 * std::abs(c));
}

TEST_CASE("compact sixteen example is a resonance with an alternating solution") {
    const auto chain = buildSixteenChain(v2Compact());
    CHECK(chain.basisSt0.cols() > 0);
    const auto r = classify(v2Compact(), Threshold::Sixteen);
    CHECK(r.classification == Classification::Resonance);
    REQUIRE(r.phi.has_value());
    CHECK(r.residualSup < 1e-9);
    CHECK(r.orthogonalityResidual < 1e-10);
    const auto& phi = *r.phi;
    const cplx c = phi[6];
    for (long n = -phi.window.radius(); n <= phi.window.radius(); ++n) {
        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        CHECK(std::abs(phi[n] - c * sign * (n == 0 ? 2.0 : 1.0)) < 1e-9 * std::abs(c));
    }
}

TEST_CASE("classification is translation invariant") {
    for (long k = -3; k <= 3; ++k) {
        CHECK(classify(v1().translated(k), Threshold::Zero).classification == Classification::SecondKindResonance);
        CHECK(classify(v2Compact().translated(k), Threshold::Sixteen).classification == Classification::Resonance);
        CHECK(classify(Potential::delta(k), Threshold::Zero).classification == Classification::Regular);
    }
}

TEST_CASE("report is total on other inputs and rejects invalid ones") {
    CHECK_NOTHROW(classify(v1(), Threshold::Sixteen));
    CHECK_THROWS_AS(classify(Potential(), Threshold::Zero), Error);
    CHECK_THROWS_AS(classify(Potential(v1().entries(), 16.0), Threshold::Sixteen), Error);
    const auto r = classify(v1(), Threshold::Zero);
    for (const auto& d : r.decisions) {
        CHECK(std::is_sorted(d.singularValues.rbegin(), d.singularValues.rend()));
        CHECK(d.nullity <= d.dimension);
    }
}
