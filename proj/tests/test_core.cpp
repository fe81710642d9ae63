#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "qclock/core.hpp"

using namespace qclock;

namespace {

BlochVector random_ball_vector(std::mt19937_64& eng, double radius_max = 1.0) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double u = gauss(eng), v = gauss(eng), w = gauss(eng);
    const double n = std::sqrt(u * u + v * v + w * w);
    const double r = radius_max * std::cbrt(uni(eng));
    return BlochVector{r * u / n, r * v / n, r * w / n, Frame::dirac};
}

}  // namespace

TEST_CASE("parameter validation and derived quantities") {
    const SystemParams p = SystemParams::make(10.0, 10.05, 0.1, 0.005);
    CHECK(p.detuning() == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(p.total_rabi() == doctest::Approx(std::sqrt(0.05 * 0.05 + 0.01)).epsilon(1e-15));

    // recomputation is bitwise stable
    CHECK(p.detuning() == p.detuning());
    CHECK(p.total_rabi() == p.total_rabi());

    CHECK_THROWS_AS(SystemParams::make(10.0, 10.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(SystemParams::make(10.0, 10.0, -0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(SystemParams::make(10.0, 10.0, 0.1, -1e-3), std::invalid_argument);
    CHECK_THROWS_AS(SystemParams::make(0.0, 10.0, 0.1, 0.0), std::invalid_argument);

    const SystemParams q = SystemParams::from_detuning(10.0, 0.0, 0.1, 0.0);
    CHECK(q.detuning() == 0.0);
}

TEST_CASE("bloch_from_density on reference states") {
    const BlochVector g = bloch_from_density(DensityMatrix::ground());
    CHECK(g.u == 0.0);
    CHECK(g.v == 0.0);
    CHECK(g.w == -1.0);

    const BlochVector mixed = bloch_from_density(DensityMatrix::maximally_mixed());
    CHECK(mixed.u == 0.0);
    CHECK(mixed.v == 0.0);
    CHECK(mixed.w == 0.0);

    // |+><+| with |+> = (|e> + |g>)/sqrt(2): every entry 1/2
    DensityMatrix plus;
    plus.rho00 = plus.rho01 = plus.rho10 = plus.rho11 = 0.5;
    const BlochVector x = bloch_from_density(plus);
    CHECK(x.u == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(x.v == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(x.w == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("density_from_bloch inverts bloch_from_density") {
    const DensityMatrix g = density_from_bloch(BlochVector{0.0, 0.0, -1.0, Frame::dirac});
    CHECK(std::abs(g.rho00) == 0.0);
    CHECK(std::abs(g.rho11 - 1.0) == 0.0);

    const DensityMatrix mixed = density_from_bloch(BlochVector{0.0, 0.0, 0.0, Frame::dirac});
    CHECK(mixed.rho00.real() == 0.5);
    CHECK(mixed.rho11.real() == 0.5);

    std::mt19937_64 eng(7);
    for (int i = 0; i < 1000; ++i) {
        const BlochVector r = random_ball_vector(eng);
        const BlochVector back = bloch_from_density(density_from_bloch(r));
        CHECK(std::abs(back.u - r.u) < 1e-14);
        CHECK(std::abs(back.v - r.v) < 1e-14);
        CHECK(std::abs(back.w - r.w) < 1e-14);
        CHECK(back.frame == r.frame);
    }
}

TEST_CASE("state validation rejects unphysical inputs") {
    DensityMatrix bad_trace;
    bad_trace.rho00 = 0.7;
    bad_trace.rho11 = 0.4;
    CHECK_THROWS_AS(bloch_from_density(bad_trace), invalid_state_error);

    DensityMatrix not_hermitian = DensityMatrix::maximally_mixed();
    not_hermitian.rho01 = {0.1, 0.0};
    not_hermitian.rho10 = {0.3, 0.0};
    CHECK_THROWS_AS(bloch_from_density(not_hermitian), invalid_state_error);

    DensityMatrix negative = DensityMatrix::maximally_mixed();
    negative.rho01 = negative.rho10 = 0.7;  // eigenvalues 1.2 and -0.2
    CHECK_THROWS_AS(bloch_from_density(negative), invalid_state_error);

    CHECK_THROWS_AS(density_from_bloch(BlochVector{1.1, 0.0, 0.0, Frame::dirac}),
                    invalid_state_error);
    CHECK_THROWS_AS(density_from_bloch(BlochVector{0.1, 0.0, 0.0, Frame::transformed}),
                    invalid_state_error);

    // a point barely inside the tolerance band is accepted
    CHECK_NOTHROW(density_from_bloch(BlochVector{1.0 + 1e-11, 0.0, 0.0, Frame::dirac}));
}

TEST_CASE("dirac_to_lab rotates by omega0 t about z") {
    const SystemParams p = SystemParams::from_detuning(10.0, 0.0, 0.1, 0.0);

    const BlochVector r{0.3, -0.4, 0.5, Frame::dirac};
    const BlochVector at0 = dirac_to_lab(r, p, 0.0);
    CHECK(at0.u == r.u);
    CHECK(at0.v == r.v);
    CHECK(at0.w == r.w);
    CHECK(at0.frame == Frame::lab);

    // quarter turn: omega0 t = pi/2 sends x to y
    const double t = 0.5 * std::numbers::pi / p.omega0;
    const BlochVector x = dirac_to_lab(BlochVector{1.0, 0.0, 0.0, Frame::dirac}, p, t);
    CHECK(x.u == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(x.v == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(x.w == 0.0);

    CHECK_THROWS_AS(dirac_to_lab(BlochVector{0.0, 0.0, 0.0, Frame::lab}, p, 1.0),
                    frame_mismatch_error);

    std::mt19937_64 eng(11);
    std::uniform_real_distribution<double> uni(0.0, 100.0);
    for (int i = 0; i < 500; ++i) {
        const BlochVector in = random_ball_vector(eng);
        const BlochVector out = dirac_to_lab(in, p, uni(eng));
        CHECK(out.w == in.w);  // z untouched
        const double planar_in = in.u * in.u + in.v * in.v;
        const double planar_out = out.u * out.u + out.v * out.v;
        CHECK(std::abs(planar_out - planar_in) < 1e-14);
    }
}
