#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "nlstrap/dynamics.hpp"
#include "nlstrap/random_fields.hpp"

using namespace nlstrap;
using fixtures::desk;
using fixtures::small;

TEST_SUITE("dynamics") {

TEST_CASE("the zero field stays at rest") {
    EvolveConfig c;
    c.t_final = 0.05;
    c.cadence = 5;
    const Field z = Field::zeros(small());
    CHECK(strang_step(z, c).max_abs() == 0.0);
    const TrajectorySummary tr = evolve(z, c);
    CHECK_FALSE(tr.collapse);
    CHECK(tr.final_state->max_abs() == 0.0);
    CHECK(tr.t.size() == 3);
}

TEST_CASE("one step preserves the mass") {
    const Field u = fixtures::gaussian(desk(), 1.5, 0.5, 1.0);
    const Field v = strang_step(u, EvolveConfig{});
    CHECK(l2_norm_sq(v) == doctest::Approx(l2_norm_sq(u)).epsilon(1e-12));
}

TEST_CASE("step-size and parameter validation") {
    EvolveConfig c;
    CHECK(cfl_number(desk(), 0.005) == doctest::Approx(3.0 * 4.0 * std::numbers::pi * std::numbers::pi * 0.005));
    c.dt = 0.1;
    CHECK_THROWS_AS(c.validate(desk()), std::invalid_argument);
    c.dt = 0.0;
    CHECK_THROWS_AS(c.validate(desk()), std::invalid_argument);
    c = EvolveConfig{};
    c.cadence = 0;
    CHECK_THROWS_AS(c.validate(desk()), std::invalid_argument);
    c = EvolveConfig{};
    c.p = 5.0;
    CHECK_THROWS_AS(c.validate(desk()), std::invalid_argument);
    c = EvolveConfig{};
    c.t_final = -1.0;
    CHECK_THROWS_AS(c.validate(desk()), std::invalid_argument);
    c = EvolveConfig{};
    c.dt = -0.005;
    CHECK_NOTHROW(c.validate(desk()));
    CHECK(c.steps() == 4000);
}

TEST_CASE("linear regime rotates at the spectral bottom") {
    const Grid3 g = make_grid(32, 32, 256, 16, 16, 512);
    const double mu = 0.02;
    Field u = fixtures::psi0_times(g, [mu](double z) { return std::exp(-0.5 * mu * mu * z * z); });
    u = (1e-8 / std::sqrt(l2_norm_sq(u))) * u;
    EvolveConfig c;
    c.dt = 0.01;
    c.t_final = 1.0;
    c.cadence = 100;
    const TrajectorySummary tr = evolve(u, c);
    const double omega = -std::arg(inner(u, *tr.final_state)) / c.t_final;
    CHECK(std::abs(omega - 2.0) <= 1e-3);
}

TEST_CASE("a ground state is stationary up to phase") {
    const GroundStateResult& s = fixtures::solution(0.2);
    REQUIRE(s.status == SolveStatus::interior);
    EvolveConfig c;
    c.cadence = 400;
    const TrajectorySummary tr = evolve(s.u, c, &s.u);
    CHECK_FALSE(tr.collapse);
    CHECK(tr.max_distance <= 1e-4);
    CHECK(tr.mass_drift <= 1e-10);
    CHECK(tr.energy_drift <= 1e-6);
    CHECK(tr.t.back() == doctest::Approx(20.0));
}

TEST_CASE("untrapped large Gaussian is flagged") {
    EvolveConfig c;
    c.trap = false;
    c.t_final = 2.0;
    c.cadence = 10;
    const Field u = 6.0 * fixtures::gaussian(desk(), std::pow(std::numbers::pi, 0.75));
    const TrajectorySummary tr = evolve(u, c);
    CHECK(tr.collapse);
    CHECK_FALSE(tr.collapse_reason.empty());
    CHECK(tr.t.back() < 2.0);
}

TEST_CASE("orbital distance") {
    const Field& uref = fixtures::localized().u;
    const Field u = std::polar(1.0, std::numbers::pi / 3.0) * shift_x3(uref, 1.7);
    const OrbitFit fit = orbital_fit(u, uref);
    CHECK(fit.distance <= 1e-10 * std::sqrt(h_norm_sq(uref)));
    CHECK(fit.shift == doctest::Approx(1.7).epsilon(1e-6));
    CHECK(std::remainder(fit.theta - std::numbers::pi / 3.0, 2.0 * std::numbers::pi) == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));

    // Perturbation orthogonal in H to the reference.
    std::mt19937_64 rng(3);
    Field v = random_smooth_field(desk(), rng);
    v = v - (h_inner(uref, v) / h_norm_sq(uref)) * uref;
    const double eps = 1e-2 * std::sqrt(h_norm_sq(uref));
    v = (eps / std::sqrt(h_norm_sq(v))) * v;
    const double d = orbital_distance(uref + v, uref);
    CHECK(d > 0.0);
    CHECK(d <= eps * (1.0 + 1e-12));

    const Field w = perturb(shift_x3(uref, -3.1), 0.05, 9);
    CHECK(orbital_distance(w, uref) == doctest::Approx(orbital_distance(uref, w)).epsilon(1e-10));
    CHECK_THROWS_AS(orbital_distance(fixtures::gaussian(small(), 1.0), uref), std::invalid_argument);
}

TEST_CASE("perturbation has the requested relative H size") {
    const Field& u = fixtures::solution(0.1).u;
    const Field w = perturb(u, 0.01, 42);
    CHECK(std::sqrt(h_norm_sq(w - u) / h_norm_sq(u)) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(perturb(u, 0.01, 42).data() == w.data());
    CHECK(perturb(u, 0.0, 42).data() == u.data());
}

TEST_CASE("long run conserves mass and energy") {
    const Field u = fixtures::gaussian(small(), 0.5, 0.3, -0.4);
    EvolveConfig c;
    c.t_final = 50.0;
    c.cadence = 500;
    const TrajectorySummary tr = evolve(u, c);
    CHECK(tr.t.size() == 21);
    CHECK(tr.mass_drift <= 1e-10);
    CHECK(tr.energy_drift <= 1e-6);
}

TEST_CASE("time reversal and gauge covariance") {
    std::mt19937_64 rng(5);
    const Field v = random_smooth_field(desk(), rng);
    const Field u = fixtures::gaussian(desk(), 1.0) + (0.2 / std::sqrt(l2_norm_sq(v))) * v;
    EvolveConfig fwd;
    fwd.t_final = 1.0;
    fwd.cadence = 50;
    const TrajectorySummary tr = evolve(u, fwd);
    REQUIRE_FALSE(tr.collapse);
    const Field mid = *tr.final_state;
    EvolveConfig back = fwd;
    back.dt = -fwd.dt;
    const Field end = *evolve(mid, back).final_state;
    CHECK(std::sqrt(h_norm_sq(end - u) / h_norm_sq(u)) <= 1e-6);

    const cplx g = std::polar(1.0, 0.9);
    const Field a = *evolve(g * u, fwd).final_state;
    CHECK(std::sqrt(l2_norm_sq(a - g * mid) / l2_norm_sq(mid)) <= 1e-12);
}

}
