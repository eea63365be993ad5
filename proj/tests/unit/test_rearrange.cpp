#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "nlstrap/random_fields.hpp"
#include "nlstrap/rearrange.hpp"
#include "nlstrap/verify.hpp"

using namespace nlstrap;
using fixtures::desk;

namespace {

Slice2 slice3(std::vector<double> v) { return Slice2{3, 3, 1.0, 1.0, std::move(v)}; }

Field off_center(double c1, double sx = 1.0) {
    return Field::sample(desk(), [=](double x, double y, double z) {
        return cplx(std::exp(-0.5 * ((x - c1) * (x - c1) / (sx * sx) + y * y + z * z / 4.0)));
    });
}

std::vector<double> sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_SUITE("rearrange") {

TEST_CASE("3x3 slice: largest value to the center, next to the nearest ring") {
    const Slice2 out = schwarz2d(slice3({9, 1, 0, 1, 5, 1, 0, 1, 0}));
    CHECK(out.values == std::vector<double>{1, 5, 0, 1, 9, 1, 0, 1, 0});
    const Slice2 sym = slice3({0, 1, 0, 1, 5, 1, 0, 1, 0});
    CHECK(schwarz2d(sym).values == sym.values);
    const Slice2 flat = slice3(std::vector<double>(9, 2.0));
    CHECK(schwarz2d(flat).values == flat.values);
}

TEST_CASE("1D line: center, then left, then right") {
    const Line1 out = symm_decr_1d(Line1{5, 1.0, {0, 3, 1, 2, 0}});
    CHECK(out.values == std::vector<double>{0, 2, 3, 1, 0});
    const Line1 sd{5, 1.0, {0, 2, 3, 1, 0}};
    CHECK(symm_decr_1d(sd).values == sd.values);
    const Line1 c{6, 0.5, std::vector<double>(6, 1.5)};
    CHECK(symm_decr_1d(c).values == c.values);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(schwarz2d(slice3({1, 2, 3})), std::invalid_argument);
    CHECK_THROWS_AS(schwarz2d(slice3({1, 2, 3, 4, -5, 6, 7, 8, 9})), std::invalid_argument);
    CHECK_THROWS_AS(symm_decr_1d(Line1{3, 1.0, {1.0, std::nan(""), 0.0}}), std::invalid_argument);
}

TEST_CASE("idempotence and equimeasurability") {
    std::mt19937_64 rng(5);
    const Field f = random_smooth_field(desk(), rng);
    for (int c : {10, 32, 50}) {
        const Slice2 s = slice_of(f, c);
        const Slice2 once = schwarz2d(s);
        CHECK(schwarz2d(once).values == once.values);
        CHECK(sorted(once.values) == sorted(s.values));
    }
    const Line1 l = line_of(f, 14, 17);
    const Line1 once = symm_decr_1d(l);
    CHECK(symm_decr_1d(once).values == once.values);
    CHECK(sorted(once.values) == sorted(l.values));
    const Field rp = rearrange_planes(f);
    CHECK(rearrange_planes(rp).data() == rp.data());
}

TEST_CASE("trap moment: equality on radial fields, strict drop off center") {
    const TrapMomentCheck eq = trap_moment_check(fixtures::gaussian(desk(), 1.0));
    CHECK(eq.holds);
    CHECK(eq.after == doctest::Approx(eq.before).epsilon(1e-12));

    const Field u = off_center(2.0);
    const TrapMomentCheck tm = trap_moment_check(u);
    CHECK(tm.holds);
    CHECK(tm.after < tm.before);
    CHECK(tm.before - tm.after == doctest::Approx(4.0 * l2_norm_sq(u)).epsilon(1e-6));
    REQUIRE(tm.slice_before.size() == 64);
    for (int c = 0; c < 64; ++c) CHECK(tm.slice_after[c] <= tm.slice_before[c] * (1.0 + 1e-12));
}

TEST_CASE("trap moment inequality over a random corpus") {
    std::mt19937_64 rng(77);
    int failures = 0;
    for (int i = 0; i < 100; ++i)
        if (!trap_moment_check(random_smooth_field(desk(), rng)).holds) ++failures;
    CHECK(failures == 0);
}

TEST_CASE("L2 and L4 norms are preserved") {
    std::mt19937_64 rng(8);
    for (const Field& f : {random_smooth_field(desk(), rng), white_noise_field(desk(), rng), off_center(1.5)}) {
        const NormCheck n = norm_preservation_check(f);
        CHECK(n.holds);
        CHECK(n.l2_after == doctest::Approx(n.l2_before).epsilon(1e-12));
        CHECK(n.lq_after == doctest::Approx(n.lq_before).epsilon(1e-12));
    }
}

TEST_CASE("kinetic energy does not grow on smooth fields") {
    std::mt19937_64 rng(12);
    const KineticCheck noise = kinetic_check(white_noise_field(desk(), rng));
    CHECK_FALSE(noise.applicable);
    CHECK(noise.holds);

    const KineticCheck elong = kinetic_check(off_center(0.0, 2.0));
    REQUIRE(elong.applicable);
    CHECK(elong.holds);
    CHECK(elong.after_planes < elong.before * (1.0 - 1e-3));

    // Translation leaves the kinetic energy unchanged.
    const KineticCheck shifted = kinetic_check(off_center(2.0));
    REQUIRE(shifted.applicable);
    CHECK(shifted.holds);
    CHECK(shifted.after_planes == doctest::Approx(shifted.before).epsilon(1e-3));

    int applicable = 0;
    for (int i = 0; i < 20; ++i) {
        const KineticCheck k = kinetic_check(random_smooth_field(desk(), rng));
        applicable += k.applicable;
        CHECK(k.holds);
    }
    CHECK(applicable >= 18);
}

TEST_CASE("Hardy-Littlewood pairing") {
    const HardyLittlewood hl = hardy_littlewood_check(Line1{3, 1.0, {1, 0, 0}}, Line1{3, 1.0, {0, 0, 1}});
    CHECK(hl.plain == 0.0);
    CHECK(hl.rearranged == 1.0);
    CHECK(hl.holds);
    const Line1 f{4, 0.5, {0.2, 3.0, 1.0, 0.5}};
    const HardyLittlewood same = hardy_littlewood_check(f, f);
    CHECK(same.rearranged == doctest::Approx(same.plain).epsilon(1e-15));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        Line1 a{16, 0.25, std::vector<double>(16)}, b{16, 0.25, std::vector<double>(16)};
        for (auto& v : a.values) v = U(rng);
        for (auto& v : b.values) v = U(rng);
        CHECK(hardy_littlewood_check(a, b).holds);
    }
    CHECK_THROWS_AS(hardy_littlewood_check(Line1{3, 1.0, {1, 0, 0}}, Line1{4, 1.0, {0, 0, 1, 0}}),
                    std::invalid_argument);
}

TEST_CASE("equality rigidity") {
    const RigidityReport sym = equality_rigidity_probe(fixtures::gaussian(desk(), 1.0));
    CHECK(sym.planes == 64);
    CHECK(sym.symmetric == 64);
    CHECK(sym.violations == 0);

    // Two distinct positive values, off center: a strict drop.
    std::vector<cplx> v(desk().size(), 0.0);
    v[desk().index(16, 16, 5)] = 1.0;
    v[desk().index(20, 13, 5)] = 2.0;
    const RigidityReport two = equality_rigidity_probe(Field(desk(), v));
    CHECK(two.strict == 1);
    CHECK(two.violations == 0);
    CHECK(two.min_margin > 0.0);

    // A plateau is a tied slice: noted, not asserted.
    std::vector<cplx> w(desk().size(), 0.0);
    for (int a = 20; a < 24; ++a)
        for (int b = 10; b < 13; ++b) w[desk().index(a, b, 9)] = 1.0;
    const RigidityReport tied = equality_rigidity_probe(Field(desk(), w));
    CHECK(tied.tied == 1);
    CHECK(tied.violations == 0);

    const RigidityReport off = equality_rigidity_probe(off_center(2.0));
    CHECK(off.violations == 0);
    CHECK(off.strict == 64);
    CHECK(off.tied_equal == 0);
}

TEST_CASE("minimizers are fixed points of both rearrangements") {
    const GroundStateResult& loc = fixtures::localized();
    REQUIRE(loc.status == SolveStatus::interior);
    const Field c = center_x3(remove_phase(loc.u));
    const Field a = c.abs();
    const double dp = std::sqrt(l2_norm_sq(rearrange_planes(c) - a) / l2_norm_sq(a));
    const double dl = std::sqrt(l2_norm_sq(rearrange_lines(c) - a) / l2_norm_sq(a));
    CHECK(dp <= 1e-4);
    CHECK(dl <= 1e-4);
}

}
