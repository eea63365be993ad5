#include "nlstrap/energy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "axis_ops.hpp"
#include "nlstrap/random_fields.hpp"

namespace nlstrap {

Exponent Exponent::standard(double p) {
    if (!(p >= kMassCritical - 1e-12 && p < 5.0)) {
        throw std::invalid_argument("exponent p = " + std::to_string(p) + " outside [1+4/3, 5)");
    }
    return Exponent(p);
}

Exponent Exponent::extended(double p) {
    if (!(p > 1.0 && p < 5.0)) {
        throw std::invalid_argument("exponent p = " + std::to_string(p) + " outside (1, 5)");
    }
    return Exponent(p);
}

bool Exponent::in_standard_range() const { return p_ >= kMassCritical - 1e-12 && p_ < 5.0; }

bool EnergyReport::self_consistent() const {
    auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-12 * std::max({std::abs(a), std::abs(b), 1e-300});
    };
    bool ok = close(doth_sq, kinetic + trap) && close(energy, 0.5 * doth_sq - lp1 / (p + 1.0));
    const double poh = kinetic - trap - 3.0 * (p - 1.0) / (2.0 * (p + 1.0)) * lp1;
    ok = ok && std::abs(pohozaev - poh) <= 1e-12 * (kinetic + trap + lp1 + 1e-300);
    if (lambda) ok = ok && close(*lambda, (doth_sq - lp1) / l2_sq);
    return ok;
}

double trap_moment(const Field& u) {
    const Grid3& g = u.grid();
    const auto& x1 = g.coords(0);
    const auto& x2 = g.coords(1);
    double s = 0.0;
    std::size_t idx = 0;
    for (int a = 0; a < g.n(0); ++a)
        for (int b = 0; b < g.n(1); ++b) {
            const double v = x1[a] * x1[a] + x2[b] * x2[b];
            double col = 0.0;
            for (int c = 0; c < g.n(2); ++c, ++idx) col += std::norm(u[idx]);
            s += v * col;
        }
    return s * g.cell_volume();
}

double lq_integral(const Field& u, double q) {
    double s = 0.0;
    const double half = 0.5 * q;
    for (const auto& z : u.values()) {
        const double n = std::norm(z);
        if (n > 0.0) s += std::pow(n, half);
    }
    return s * u.grid().cell_volume();
}

EnergyReport report(const Field& u, Exponent p) {
    EnergyReport r;
    r.p = p.value();
    r.l2_sq = l2_norm_sq(u);
    r.kinetic = kinetic_energy(u);
    r.trap = trap_moment(u);
    r.doth_sq = r.kinetic + r.trap;
    r.lp1 = lq_integral(u, r.p + 1.0);
    r.energy = 0.5 * r.doth_sq - r.lp1 / (r.p + 1.0);
    if (r.l2_sq > 0.0) r.lambda = (r.doth_sq - r.lp1) / r.l2_sq;
    r.pohozaev = r.kinetic - r.trap - 3.0 * (r.p - 1.0) / (2.0 * (r.p + 1.0)) * r.lp1;
    if (!r.self_consistent()) throw std::logic_error("energy report failed its own identities");
    return r;
}

double energy(const Field& u, Exponent p) {
    const double q = p.value() + 1.0;
    return 0.5 * (kinetic_energy(u) + trap_moment(u)) - lq_integral(u, q) / q;
}

Field energy_gradient(const Field& u, Exponent p) {
    const Grid3& g = u.grid();
    std::vector<cplx> v(u.data());
    detail::laplacian_inplace(g, v);
    const auto& x1 = g.coords(0);
    const auto& x2 = g.coords(1);
    const double half = 0.5 * (p.value() - 1.0);
    std::size_t idx = 0;
    for (int a = 0; a < g.n(0); ++a)
        for (int b = 0; b < g.n(1); ++b) {
            const double pot = x1[a] * x1[a] + x2[b] * x2[b];
            for (int c = 0; c < g.n(2); ++c, ++idx) {
                const cplx z = u[idx];
                const double n = std::norm(z);
                const double nl = n > 0.0 ? std::pow(n, half) : 0.0;
                v[idx] = -v[idx] + (pot - nl) * z;
            }
        }
    return Field(g, std::move(v));
}

double gn_ratio(const Field& u, Exponent p) {
    const double l2 = l2_norm_sq(u);
    if (!(l2 > 0.0)) throw std::invalid_argument("gn_ratio: zero field");
    const double pv = p.value();
    const double doth = kinetic_energy(u) + trap_moment(u);
    const double lp1 = lq_integral(u, pv + 1.0);
    return lp1 / (std::pow(l2, (5.0 - pv) / 4.0) * std::pow(doth, (3.0 * pv - 3.0) / 4.0));
}

GnCalibration calibrate_gn_constant(const Grid3& grid, Exponent p, int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("calibrate_gn_constant: count must be positive");
    std::mt19937_64 rng(seed);
    GnCalibration out;
    out.ratios.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double r = gn_ratio(random_smooth_field(grid, rng), p);
        out.ratios.push_back(r);
        out.c_hat = std::max(out.c_hat, r);
    }
    return out;
}

bool confinement_lower_bound_check(const Field& u) {
    const double l2 = l2_norm_sq(u);
    const double doth = kinetic_energy(u) + trap_moment(u);
    return 2.0 * l2 <= doth * (1.0 + 1e-8);
}

namespace {

// Trigonometric interpolation of n periodic samples at nodes x_j onto points
// y_i; rows for points outside [-L/2, L/2) are zero.
detail::RowMatrix interpolation_matrix(const Grid3& grid, int axis, double scale) {
    const int n = grid.n(axis);
    const double L = grid.length(axis);
    const auto& x = grid.coords(axis);
    const double base = 2.0 * std::numbers::pi / L;
    detail::RowMatrix M = detail::RowMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double y = scale * x[i];
        if (y < -0.5 * L || y >= 0.5 * L) continue;
        for (int j = 0; j < n; ++j) {
            const double d = y - x[j];
            double s = 1.0;
            for (int m = 1; m < n / 2; ++m) s += 2.0 * std::cos(base * m * d);
            if (n % 2 == 0) s += std::cos(base * (n / 2) * d);
            M(i, j) = s / n;
        }
    }
    return M;
}

}  // namespace

Field rescale(const Field& psi, double lambda) {
    if (!(lambda >= 1.0)) throw std::invalid_argument("rescale: lambda must be >= 1");
    const Grid3& g = psi.grid();
    std::vector<cplx> v(psi.data());
    for (int a = 0; a < 3; ++a) detail::apply_axis_matrix(g, v, a, interpolation_matrix(g, a, lambda));
    const double amp = std::pow(lambda, 1.5);
    for (auto& z : v) z *= amp;
    return Field(g, std::move(v));
}

std::vector<ScalingRow> scaling_sweep(const Field& psi, Exponent p, std::span<const double> lambdas) {
    const EnergyReport base = report(psi, p);
    const double pv = p.value();
    std::vector<ScalingRow> rows;
    rows.reserve(lambdas.size());
    for (double lam : lambdas) {
        ScalingRow row;
        row.scale = lam;
        row.energy_analytic = 0.5 * lam * lam * base.kinetic -
                              std::pow(lam, 1.5 * (pv - 1.0)) * base.lp1 / (pv + 1.0) +
                              0.5 * base.trap / (lam * lam);
        const Field scaled = rescale(psi, lam);
        row.energy_resampled = energy(scaled, p);
        row.spectral_tail = spectral_tail(scaled);
        row.flagged = row.spectral_tail > 1e-6;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace nlstrap
