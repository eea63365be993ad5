#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "nlstrap/groundstate.hpp"
#include "nlstrap/random_fields.hpp"

using namespace nlstrap;
using fixtures::desk;
using fixtures::solution;

TEST_SUITE("groundstate") {

TEST_CASE("solve at r = 0.1 lands inside the expected window") {
    const GroundStateResult& s = solution(0.1);
    const double r = 0.1;
    CHECK(s.status == SolveStatus::interior);
    CHECK(s.converged);
    CHECK(s.residual <= 1e-8);
    CHECK(s.lambda < kSpectralBottom);
    const GnCalibration cal = calibrate_gn_constant(desk(), Exponent::standard(3.0), 200, 1);
    CHECK(s.lambda > 2.0 * (1.0 - cal.c_hat * r * r));
    CHECK(s.J < r * r);
    CHECK(std::abs(l2_norm_sq(s.u) - r * r) <= 1e-12 * r * r);
    CHECK(s.doth <= 4.0 * r);
    CHECK(s.boundary_flag == (s.boundary_mass > 1e-8));
    for (double m : s.mass_history) CHECK(std::abs(m - r * r) <= 1e-12 * r * r);
    for (std::size_t i = 1; i < s.energy_history.size(); ++i)
        CHECK(s.energy_history[i] <= s.energy_history[i - 1] + 1e-13 * r * r);
    CHECK(el_residual(s.u, Exponent::standard(3.0), s.lambda) <= 1e-8);
}

TEST_CASE("large mass escapes the monitored ball") {
    SolveConfig c;
    c.r = 5.0;
    const GroundStateResult s = solve(desk(), c);
    CHECK(s.status == SolveStatus::escaped);
    CHECK(s.doth > c.chi);
}

TEST_CASE("complex-phase start converges to a constant-phase minimizer") {
    const GroundStateResult& s = solution(0.1, 4.0, InitKind::gaussian_complex_phase);
    REQUIRE(s.status == SolveStatus::interior);
    CHECK(phase_analysis(s.u).phase_std <= 1e-6);
    CHECK(s.J == doctest::Approx(solution(0.1).J).epsilon(1e-6));
}

TEST_CASE("shifted start reaches the same level") {
    SolveConfig c;
    c.r = 0.1;
    const Field start = shift_x3(initial_field(desk(), c), 4.5);
    const GroundStateResult s = solve(desk(), c, &start);
    REQUIRE(s.status == SolveStatus::interior);
    CHECK(s.J == doctest::Approx(solution(0.1).J).epsilon(1e-6));
}

TEST_CASE("configuration validation") {
    SolveConfig c;
    c.r = 0.0;
    CHECK_THROWS_AS(solve(desk(), c), std::invalid_argument);
    c = SolveConfig{};
    c.p = 5.0;
    CHECK_THROWS_AS(solve(desk(), c), std::invalid_argument);
    c = SolveConfig{};
    c.dt_max = 0.5;
    CHECK_THROWS_AS(solve(desk(), c), std::invalid_argument);
    CHECK_THROWS_AS(parse_init_kind("cosine"), std::invalid_argument);
    CHECK(parse_init_kind("gaussian-complex-phase") == InitKind::gaussian_complex_phase);
}

TEST_CASE("residual is orthogonal to u at the reported multiplier") {
    std::mt19937_64 rng(2);
    const Field u = fixtures::gaussian(desk(), 0.7, 0.5, -1.0) + 0.1 * random_smooth_field(desk(), rng);
    const Exponent p = Exponent::standard(3.0);
    const double lambda = *report(u, p).lambda;
    CHECK(std::abs(inner(el_residual_field(u, p, lambda), u)) <= 1e-10 * l2_norm_sq(u));
    CHECK_THROWS_AS(el_residual(Field::zeros(desk()), p, 2.0), std::invalid_argument);
}

TEST_CASE("near-linear regime residual") {
    const Grid3 g = make_grid(32, 32, 256, 16, 16, 512);
    const double mu = 0.02;
    Field u = fixtures::psi0_times(g, [mu](double z) { return std::exp(-0.5 * mu * mu * z * z); });
    u = (1e-6 / std::sqrt(l2_norm_sq(u))) * u;
    CHECK(el_residual(u, Exponent::standard(3.0), rayleigh_quotient(u)) <= 2e-3);
}

TEST_CASE("geometry of local minima") {
    const Exponent p = Exponent::standard(3.0);
    const GnCalibration cal = calibrate_gn_constant(desk(), p, 200, 1);
    for (double r : {1e-3, 1e-4}) {
        const GeometryGap gap = geometry_gap(r, 4.0, cal.c_hat, p);
        CHECK(gap.holds);
        CHECK(gap.lhs == doctest::Approx(16.0 * r * r / 8.0).epsilon(1e-12));
        CHECK(gap.rhs >= 3.0 * 16.0 * r * r / 8.0 * (1.0 - 1e-9));
    }
    const double r0 = geometry_threshold(4.0, cal.c_hat, p);
    REQUIRE(r0 > 0.0);
    CHECK(geometry_gap(0.99 * r0, 4.0, cal.c_hat, p).holds);
    CHECK_FALSE(geometry_gap(1.01 * r0, 4.0, cal.c_hat, p).holds);
    CHECK_THROWS_AS(geometry_gap(0.0, 4.0, cal.c_hat, p), std::invalid_argument);
}

TEST_CASE("strict subadditivity of the level") {
    std::map<double, GroundStateResult> m;
    m.emplace(0.1, solution(0.1));
    m.emplace(0.2, solution(0.2));
    const auto rows = subadditivity_check(m);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].r == 0.1);
    CHECK(rows[0].s == 0.2);
    CHECK(rows[0].holds);
    CHECK(rows[0].r2_Js < rows[0].s2_Jr);

    GroundStateResult bad = solution(0.2);
    bad.status = SolveStatus::escaped;
    m.insert_or_assign(0.2, bad);
    CHECK_THROWS_AS(subadditivity_check(m), std::invalid_argument);
}

TEST_CASE("profile error vanishes on tensor profiles") {
    const OscillatorBasis b = build_basis(desk(), default_mode_cutoff(desk()));
    const Field u = fixtures::psi0_times(desk(), [](double z) { return 0.3 * std::exp(-z * z / 18.0); });
    const ProfileError e = profile_error(u, 0.3, b);
    CHECK(e.err <= 1e-10);
    CHECK(e.mode_sum_err <= 1e-10);
    const ProfileError s = profile_error(solution(0.2).u, 0.2, b);
    CHECK(s.err > 0.0);
    CHECK(s.err_over_r == doctest::Approx(s.err / 0.2));
    CHECK(s.mode_sum_err == doctest::Approx(s.err).epsilon(1e-3));
}

TEST_CASE("symmetry diagnostics") {
    const SymmetryReport syn = symmetry_check(fixtures::gaussian(desk(), 1.0));
    CHECK(syn.max_defect() <= 1e-12);
    CHECK(syn.center_index == 32);

    const SymmetryReport m = symmetry_check(remove_phase(solution(0.2).u));
    CHECK(m.max_defect() <= 1e-4);

    const GroundStateResult& loc = fixtures::localized();
    REQUIRE(loc.status == SolveStatus::interior);
    const Field moved = roll_x3(remove_phase(loc.u), 7);
    const SymmetryReport sh = symmetry_check(moved);
    CHECK(sh.evenness_raw > 1e-2);
    CHECK(sh.evenness <= 1e-4);
    CHECK(sh.max_defect() <= 1e-4);
}

TEST_CASE("ground-state certificate") {
    const GroundStateResult& s = solution(0.1);
    const Certificate c = ground_state_certificate(s.u, Exponent::standard(3.0), 4.0, 0.1);
    CHECK(c.pohozaev_ratio <= 1e-2);
    CHECK(c.holds);
    CHECK_THROWS_AS(ground_state_certificate(s.u, Exponent::standard(7.0 / 3.0), 4.0, 0.1), std::invalid_argument);

    const Certificate g = ground_state_certificate(fixtures::gaussian(desk(), 1.0), Exponent::standard(3.0), 4.0, 1.0);
    const double c0 = std::pow(2.0 * std::numbers::pi, -1.5);
    CHECK(g.pohozaev_ratio == doctest::Approx((0.5 - 0.75 * c0) / 2.5).epsilon(1e-6));
    CHECK_FALSE(g.holds);
}

TEST_CASE("phase removal") {
    const Field u = std::polar(1.0, 1.1) * fixtures::gaussian(desk(), 0.5);
    const PhaseReport ph = phase_analysis(u);
    CHECK(ph.theta == doctest::Approx(1.1).epsilon(1e-12));
    CHECK(ph.phase_std <= 1e-12);
    const Field v = remove_phase(u);
    for (std::size_t i = 0; i < v.size(); i += 97) CHECK(std::abs(v[i].imag()) <= 1e-14);
}

TEST_CASE("solves are deterministic") {
    SolveConfig c;
    c.r = 0.15;
    c.init = InitKind::random_smooth;
    c.seed = 4;
    const GroundStateResult a = solve(desk(), c);
    const GroundStateResult b = solve(desk(), c);
    CHECK(a.iters == b.iters);
    CHECK(a.u.data() == b.u.data());
    CHECK(a.energy_history == b.energy_history);
}

}
