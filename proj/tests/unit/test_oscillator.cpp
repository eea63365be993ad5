#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "nlstrap/oscillator.hpp"
#include "nlstrap/random_fields.hpp"

using namespace nlstrap;
using fixtures::desk;

TEST_SUITE("oscillator") {

TEST_CASE("Hermite functions: closed forms and orthonormality") {
    std::vector<double> x(2001);
    for (int i = 0; i < 2001; ++i) x[i] = -20.0 + 0.02 * i;
    const auto h = hermite_functions(6, x);
    const double c0 = std::pow(std::numbers::pi, -0.25);
    CHECK(h[1000] == doctest::Approx(c0));
    CHECK(h[2001 + 1500] == doctest::Approx(c0 * std::sqrt(2.0) * 10.0 * std::exp(-50.0)).epsilon(1e-12).scale(0.0));
    for (int a = 0; a <= 6; ++a)
        for (int b = 0; b <= 6; ++b) {
            double s = 0.0;
            for (int i = 0; i < 2001; ++i) s += h[a * 2001 + i] * h[b * 2001 + i] * 0.02;
            CHECK(s == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-10));
        }
}

TEST_CASE("basis ordering, eigenvalues and the spectral bottom") {
    const OscillatorBasis b = build_basis(desk(), 10);
    CHECK(b.eigenvalue(0) == 2.0);
    CHECK(b.index(1).m == 0);
    CHECK(b.index(1).n == 1);
    CHECK(b.index(2).m == 1);
    CHECK(b.eigenvalue(2) == 4.0);
    CHECK(b.index(9).degree() == 3);
    CHECK(b.eigenvalue(9) == 8.0);
    // Psi_0 is the normalized ground mode pi^{-1/2} e^{-(x1^2+x2^2)/2}.
    CHECK(b.mode(0)[16 * 32 + 16] == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-8));
}

TEST_CASE("resolution check and default cutoff") {
    CHECK_THROWS_AS(build_basis(desk(), 0), std::invalid_argument);
    CHECK_THROWS_AS(build_basis(desk(), 55), std::invalid_argument);
    CHECK(default_mode_cutoff(desk()) == 45);
    const Grid3 fine = make_grid(64, 64, 8, 16, 16, 4);
    CHECK(default_mode_cutoff(fine) == 55);
}

TEST_CASE("modes are orthonormal under quadrature") {
    const OscillatorBasis b = build_basis(desk(), default_mode_cutoff(desk()));
    const double dA = desk().spacing(0) * desk().spacing(1);
    double worst = 0.0;
    for (int i = 0; i < b.size(); ++i)
        for (int j = 0; j <= i; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < desk().slice_size(); ++k) s += b.mode(i)[k] * b.mode(j)[k] * dA;
            worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
    CHECK(worst <= 1e-10);
}

TEST_CASE("Rayleigh quotient of Psi0 x g_mu tends to the spectral bottom") {
    // Long x3 box so that wide profiles stay contained.
    const Grid3 g = make_grid(32, 32, 256, 16, 16, 512);
    double prev = 1e9;
    for (double mu : {0.32, 0.16, 0.08, 0.04, 0.02}) {
        const Field u = fixtures::psi0_times(g, [mu](double z) { return std::exp(-0.5 * mu * mu * z * z); });
        const double q = rayleigh_quotient(u);
        CHECK(q == doctest::Approx(2.0 + 0.5 * mu * mu).epsilon(1e-6));
        CHECK(q < prev);
        prev = q;
    }
    CHECK(std::abs(prev - 2.0) <= 1e-3);
    CHECK_THROWS_AS(rayleigh_quotient(Field::zeros(g)), std::invalid_argument);
}

TEST_CASE("projections recover tensor profiles and masses add up") {
    const OscillatorBasis b = build_basis(desk(), 15);
    std::vector<cplx> h(64);
    for (int c = 0; c < 64; ++c) {
        const double z = desk().coords(2)[c];
        h[c] = cplx(std::exp(-z * z / 8.0), 0.3 * std::sin(z));
    }
    const Field u = tensor_field(b, 4, h);
    const auto phi4 = project_mode(u, b, 4);
    const auto phi0 = project_phi0(u, b);
    for (int c = 0; c < 64; ++c) {
        CHECK(std::abs(phi4[c] - h[c]) <= 1e-10);
        CHECK(std::abs(phi0[c]) <= 1e-10);
    }
    std::mt19937_64 rng(4);
    const Field f = random_smooth_field(desk(), rng);
    const ModeMasses mm = mode_masses(f, b);
    double s = mm.remainder;
    for (double m : mm.masses) s += m;
    CHECK(s == doctest::Approx(mm.total).epsilon(1e-12));
    CHECK(mm.remainder >= -1e-14 * mm.total);
}

TEST_CASE("discrete trap Hamiltonian: bottom, apply and shifted solves") {
    const TrapHamiltonian H(desk());
    CHECK(std::abs(H.lowest_eigenvalue() - 2.0) <= 1e-10);
    std::mt19937_64 rng(6);
    const Field f = random_smooth_field(desk(), rng);
    std::vector<cplx> d(f.data());
    H.apply(d);
    const Field Hf(desk(), d);
    // apply agrees with -Laplacian + trap.
    std::vector<cplx> manual(f.size());
    const auto lap = laplacian(f);
    for (int a = 0; a < 32; ++a)
        for (int b = 0; b < 32; ++b)
            for (int c = 0; c < 64; ++c) {
                const double x = desk().coords(0)[a], y = desk().coords(1)[b];
                const std::size_t i = desk().index(a, b, c);
                manual[i] = -lap[i] + (x * x + y * y) * f[i];
            }
    CHECK(std::sqrt(l2_norm_sq(Hf - Field(desk(), manual)) / l2_norm_sq(Hf)) <= 1e-10);
    H.solve_shifted(d, 0.5, 0.25);
    // (0.5 + 0.25 H)^{-1} H f, checked by re-applying.
    std::vector<cplx> back(d);
    H.apply(back);
    for (std::size_t i = 0; i < back.size(); ++i) back[i] = 0.5 * d[i] + 0.25 * back[i];
    CHECK(std::sqrt(l2_norm_sq(Field(desk(), back) - Hf) / l2_norm_sq(Hf)) <= 1e-10);
}

TEST_CASE("spectral second derivative matches the FFT Laplacian in 1D") {
    const int n = 16;
    const double L = 8.0;
    const auto D2 = spectral_second_derivative(n, L);
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[i] = std::cos(2 * std::numbers::pi * 3 * i / n) + std::sin(2 * std::numbers::pi * i / n);
    const double k1 = 2 * std::numbers::pi / L, k3 = 3 * k1;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += D2[i * n + j] * f[j];
        const double exact = -k3 * k3 * std::cos(2 * std::numbers::pi * 3 * i / n) - k1 * k1 * std::sin(2 * std::numbers::pi * i / n);
        CHECK(s == doctest::Approx(exact).epsilon(1e-10).scale(1.0));
    }
}

}
