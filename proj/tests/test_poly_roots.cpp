#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "qclock/poly_roots.hpp"
#include "qclock/regime.hpp"
#include "root_oracle.hpp"

using namespace qclock;
using test_oracle::weierstrass_roots;

namespace {

SystemParams zero_det(double rabi, double gamma) {
    return SystemParams::from_detuning(100.0 * rabi, 0.0, rabi, gamma);
}

std::vector<test_oracle::cplx> oracle_cubic_roots(const SystemParams& p) {
    const double delta = p.detuning();
    const double b = delta * delta + p.rabi * p.rabi + 0.25 * p.gamma * p.gamma;
    const double c = 0.5 * p.rabi * p.rabi * p.gamma;
    const std::vector<double> coeffs = {-c, b, -p.gamma};
    return weierstrass_roots(coeffs);
}

std::vector<test_oracle::cplx> stored_cubic_roots(const RootStructure& r) {
    if (r.kind == RootCase::OneRealPlusConjugatePair)
        return {r.lambda1, {r.eta, r.omega}, {r.eta, -r.omega}};
    return {r.lambda1, r.lambda2, r.lambda3};
}

}  // namespace

TEST_CASE("root oracle finds known roots") {
    // (z - 1)(z - 2)(z - 3)
    const std::vector<double> coeffs = {-6.0, 11.0, -6.0};
    const auto roots = weierstrass_roots(coeffs);
    for (const double expected : {1.0, 2.0, 3.0})
        CHECK(test_oracle::nearest_root_distance(roots, expected) < 1e-12);
}

TEST_CASE("quadratic characteristic: undamped pair") {
    const RootStructure r = quadratic_characteristic(zero_det(0.1, 0.0));
    CHECK(r.kind == RootCase::ConjugatePair);
    CHECK(r.eta == 0.0);
    CHECK(r.omega == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(r.D0 == doctest::Approx(-0.04).epsilon(1e-15));
}

TEST_CASE("quadratic characteristic: critical damping at gamma = 4 rabi") {
    const RootStructure r = quadratic_characteristic(zero_det(0.1, 0.4));
    CHECK(r.kind == RootCase::RealDouble);
    CHECK(r.eta == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(r.boundary_proximal);
}

TEST_CASE("quadratic characteristic: damped pair matches the root oracle") {
    const SystemParams p = zero_det(0.1, 0.005);
    const RootStructure r = quadratic_characteristic(p);
    CHECK(r.kind == RootCase::ConjugatePair);
    // frozen from the simultaneous-iteration oracle
    CHECK(r.eta == doctest::Approx(0.00125).epsilon(1e-14));
    CHECK(r.omega == doctest::Approx(0.099992187194800394).epsilon(1e-14));
    CHECK(std::abs(quadratic_charpoly(p, {r.eta, r.omega})) < 1e-12);
}

TEST_CASE("quadratic characteristic: overdamped roots ordered and residual-free") {
    const SystemParams p = zero_det(0.1, 0.9);
    const RootStructure r = quadratic_characteristic(p);
    CHECK(r.kind == RootCase::TwoRealDistinct);
    CHECK(r.lambda1 > r.lambda2);
    CHECK(std::abs(quadratic_charpoly(p, r.lambda1)) < 1e-14);
    CHECK(std::abs(quadratic_charpoly(p, r.lambda2)) < 1e-14);
}

TEST_CASE("cubic characteristic: gamma = 0 gives a zero root and the total-Rabi pair") {
    const SystemParams p = SystemParams::from_detuning(10.0, 0.05, 0.1, 0.0);
    const RootStructure r = cubic_characteristic(p);
    CHECK(r.kind == RootCase::OneRealPlusConjugatePair);
    CHECK(r.lambda1 == 0.0);
    CHECK(r.eta == 0.0);
    CHECK(r.omega == doctest::Approx(p.total_rabi()).epsilon(1e-14));
}

TEST_CASE("cubic characteristic at zero detuning reduces to the quadratic") {
    const SystemParams p = zero_det(0.1, 0.005);
    const RootStructure cub = cubic_characteristic(p);
    const RootStructure quad = quadratic_characteristic(p);
    CHECK(cub.kind == RootCase::OneRealPlusConjugatePair);
    CHECK(std::abs(cub.eta - quad.eta) < 1e-12);
    CHECK(std::abs(cub.omega - quad.omega) < 1e-12);
    CHECK(std::abs(cub.omega - 0.5 * std::sqrt(-quad.D0)) < 1e-12);
    // the S1/S2 cube-root identities of the zero-detuning reduction
    const double x = 0.5 * std::sqrt(-quad.D0) / p.rabi;
    CHECK(std::abs(cub.S1 * cub.S2 - (4.0 * x * x - 1.0) / 3.0) < 1e-12);
    CHECK(std::abs(0.5 * p.rabi * (cub.S1 + cub.S2) - cub.omega) < 1e-12);
}

TEST_CASE("cubic characteristic matches the root oracle on a reference point") {
    const SystemParams p = SystemParams::from_detuning(10.0, 0.05, 0.1, 0.01);
    const RootStructure r = cubic_characteristic(p);
    CHECK(r.kind == RootCase::OneRealPlusConjugatePair);
    // frozen from the simultaneous-iteration oracle
    CHECK(r.lambda1 == doctest::Approx(0.0039996798206831828).epsilon(1e-13));
    CHECK(r.eta == doctest::Approx(0.0030001600896584083).epsilon(1e-13));
    CHECK(r.omega == doctest::Approx(0.11176761462918304).epsilon(1e-13));
    for (const auto z : stored_cubic_roots(r)) {
        const double scale = std::max(1.0, cubic_charpoly_scale(p, z));
        CHECK(std::abs(cubic_charpoly(p, z)) < 1e-12 * scale);
    }
}

TEST_CASE("cube roots of negative reals stay on the real branch") {
    // gamma large enough that q > 0, so the Cardano cube roots act on
    // negative arguments; a principal complex branch would break these.
    const SystemParams p = SystemParams::from_detuning(10.0, 0.3, 0.1, 0.79);
    const RootStructure r = cubic_characteristic(p);
    REQUIRE(r.kind == RootCase::OneRealPlusConjugatePair);
    CHECK(r.q > 0.0);
    CHECK(r.R2 < 0.0);
    CHECK(std::abs(cubic_charpoly(p, r.lambda1)) <
          1e-12 * std::max(1.0, cubic_charpoly_scale(p, r.lambda1)));
}

TEST_CASE("three-real case is sorted descending and matches the oracle") {
    // inside the overdamped lens
    const double d = 0.2;
    const double gamma = 0.5 * (boundary_gamma(BoundaryCurve::b2, d) +
                                boundary_gamma(BoundaryCurve::b1, d));
    const SystemParams p = SystemParams::from_detuning(10.0, 0.1 * d, 0.1, 0.1 * gamma);
    const RootStructure r = cubic_characteristic(p);
    REQUIRE(r.kind == RootCase::ThreeRealDistinct);
    CHECK(r.lambda1 >= r.lambda2);
    CHECK(r.lambda2 >= r.lambda3);
    const auto oracle = oracle_cubic_roots(p);
    for (const auto z : stored_cubic_roots(r))
        CHECK(test_oracle::nearest_root_distance(oracle, z) < 1e-12);
}

TEST_CASE("on-boundary parameters are flagged") {
    const double d = 0.25;
    const double gamma = boundary_gamma(BoundaryCurve::b2, d);
    const SystemParams p = SystemParams::from_detuning(10.0, 0.1 * d, 0.1, 0.1 * gamma);
    const RootStructure r = cubic_characteristic(p);
    CHECK(r.boundary_proximal);
}

TEST_CASE("property: cubic roots match the oracle across random draws") {
    std::mt19937_64 eng(2024);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double rabi = std::exp(std::log(0.02) + uni(eng) * std::log(5.0 / 0.02));
        const double gamma = rabi * 8.0 * uni(eng);
        const double delta = rabi * (6.0 * uni(eng) - 3.0);
        const SystemParams p = SystemParams::from_detuning(50.0 * rabi, delta, rabi, gamma);
        const RootStructure r = cubic_characteristic(p);
        const auto oracle = oracle_cubic_roots(p);
        const double scale = rabi + gamma + std::abs(p.detuning());
        for (const auto z : stored_cubic_roots(r))
            CHECK(test_oracle::nearest_root_distance(oracle, z) < 1e-9 * scale);

        // Vieta: sum of roots is gamma, product is rabi^2 gamma / 2
        double sum, prod;
        if (r.kind == RootCase::OneRealPlusConjugatePair) {
            sum = r.lambda1 + 2.0 * r.eta;
            prod = r.lambda1 * (r.eta * r.eta + r.omega * r.omega);
        } else {
            sum = r.lambda1 + r.lambda2 + r.lambda3;
            prod = r.lambda1 * r.lambda2 * r.lambda3;
        }
        CHECK(std::abs(sum - gamma) < 1e-10 * std::max(1.0, gamma));
        const double target = 0.5 * p.rabi * p.rabi * gamma;
        CHECK(std::abs(prod - target) <= 1e-10 * std::max(target, 1e-300));
    }
}
