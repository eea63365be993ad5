#include "nlstrap/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "nlstrap/random_fields.hpp"

namespace nlstrap {

namespace {

std::vector<double> transverse_potential(const Grid3& g) {
    std::vector<double> v(g.slice_size());
    const auto& x1 = g.coords(0);
    const auto& x2 = g.coords(1);
    for (int a = 0; a < g.n(0); ++a)
        for (int b = 0; b < g.n(1); ++b) v[a * g.n(1) + b] = x1[a] * x1[a] + x2[b] * x2[b];
    return v;
}

// e^{-i |k|^2 tau} / N on the full spectral grid.
std::vector<cplx> kinetic_phase(const Grid3& g, double tau) {
    std::vector<cplx> ph(g.size());
    const double inv = 1.0 / static_cast<double>(g.size());
    const auto& k1 = g.wavenumbers(0);
    const auto& k2 = g.wavenumbers(1);
    const auto& k3 = g.wavenumbers(2);
    std::size_t i = 0;
    for (int a = 0; a < g.n(0); ++a)
        for (int b = 0; b < g.n(1); ++b)
            for (int c = 0; c < g.n(2); ++c)
                ph[i++] = std::polar(inv, -(k1[a] * k1[a] + k2[b] * k2[b] + k3[c] * k3[c]) * tau);
    return ph;
}

class Propagator {
public:
    Propagator(const Grid3& g, const EvolveConfig& cfg)
        : g_(g), cfg_(cfg), half_(kinetic_phase(g, 0.5 * cfg.dt)), full_(kinetic_phase(g, cfg.dt)),
          v_(cfg.trap ? transverse_potential(g) : std::vector<double>(g.slice_size(), 0.0)) {}

    void kinetic(std::vector<cplx>& d, bool half) const {
        const auto& ph = half ? half_ : full_;
        g_.fft3(d, true);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] *= ph[i];
        g_.fft3(d, false);
    }

    void potential(std::vector<cplx>& d) const {
        const int n3 = g_.n(2);
        const double e = 0.5 * (cfg_.p - 1.0);
        const bool cubic = cfg_.p == 3.0;
        for (std::size_t col = 0; col < g_.slice_size(); ++col) {
            cplx* row = d.data() + col * n3;
            for (int c = 0; c < n3; ++c) {
                const double m2 = std::norm(row[c]);
                const double nl = cubic ? m2 : (m2 > 0.0 ? std::pow(m2, e) : 0.0);
                row[c] *= std::polar(1.0, -cfg_.dt * (v_[col] - nl));
            }
        }
    }

    // m Strang steps with adjacent kinetic half steps fused.
    void run(std::vector<cplx>& d, int m) const {
        if (m <= 0) return;
        kinetic(d, true);
        for (int s = 0; s < m; ++s) {
            potential(d);
            kinetic(d, s + 1 == m);
        }
    }

private:
    const Grid3& g_;
    EvolveConfig cfg_;
    std::vector<cplx> half_, full_;
    std::vector<double> v_;
};

Field one_plus_h(const Field& b) {
    const Grid3& g = b.grid();
    std::vector<cplx> lap(b.data());
    detail::laplacian_inplace(g, lap);
    const auto v = transverse_potential(g);
    const int n3 = g.n(2);
    std::vector<cplx> out(b.size());
    for (std::size_t col = 0; col < g.slice_size(); ++col)
        for (int c = 0; c < n3; ++c) {
            const std::size_t i = col * n3 + c;
            out[i] = (1.0 + v[col]) * b[i] - lap[i];
        }
    return Field(g, std::move(out));
}

double sample_energy(const Field& u, const EvolveConfig& cfg) {
    const EnergyReport r = report(u, Exponent::extended(cfg.p));
    return cfg.trap ? r.energy : r.energy - 0.5 * r.trap;
}

}  // namespace

double cfl_number(const Grid3& grid, double dt) {
    double kmax = 0.0;
    for (int a = 0; a < 3; ++a) {
        double m = 0.0;
        for (double k : grid.wavenumbers(a)) m = std::max(m, k * k);
        kmax += m;
    }
    return kmax * std::abs(dt);
}

void EvolveConfig::validate(const Grid3& grid) const {
    if (!(dt != 0.0) || !std::isfinite(dt)) throw std::invalid_argument("evolve: dt must be nonzero and finite");
    if (!(t_final >= 0.0)) throw std::invalid_argument("evolve: t_final must be >= 0");
    if (cadence < 1) throw std::invalid_argument("evolve: cadence must be >= 1");
    if (!(p > 1.0 && p < 5.0)) throw std::invalid_argument("evolve: p must lie in (1, 5)");
    const double cfl = cfl_number(grid, dt);
    if (cfl >= 2.0 * std::numbers::pi)
        throw std::invalid_argument("evolve: max|k|^2 dt = " + std::to_string(cfl) + " exceeds 2 pi");
}

int EvolveConfig::steps() const { return static_cast<int>(std::llround(t_final / std::abs(dt))); }

Field strang_step(const Field& u, const EvolveConfig& cfg) {
    cfg.validate(u.grid());
    Propagator prop(u.grid(), cfg);
    std::vector<cplx> d(u.data());
    prop.run(d, 1);
    return Field(u.grid(), std::move(d));
}

double h_norm_sq(const Field& v) { return kinetic_energy(v) + trap_moment(v) + l2_norm_sq(v); }

cplx h_inner(const Field& a, const Field& b) { return inner(a, one_plus_h(b)); }

OrbitFit orbital_fit(const Field& u, const Field& uref) {
    const Grid3& g = u.grid();
    if (!g.same_geometry(uref.grid())) throw std::invalid_argument("orbital_distance: grid mismatch");
    const int n3 = g.n(2);
    const double h3 = g.spacing(2);
    const auto& k3 = g.wavenumbers(2);

    std::vector<cplx> U(u.data());
    std::vector<cplx> G(one_plus_h(uref).data());
    g.fft_x3(U, true);
    g.fft_x3(G, true);
    std::vector<cplx> A(n3, 0.0);
    for (std::size_t col = 0; col < g.slice_size(); ++col)
        for (int c = 0; c < n3; ++c) A[c] += std::conj(U[col * n3 + c]) * G[col * n3 + c];
    const double scale = g.cell_volume() / n3;
    auto corr = [&](double k) {
        cplx s = 0.0;
        for (int c = 0; c < n3; ++c) s += A[c] * std::polar(1.0, -k3[c] * k);
        return s * scale;
    };

    int best = 0;
    double best_val = -1.0;
    for (int j = 0; j < n3; ++j) {
        const double v = std::abs(corr(j * h3));
        if (v > best_val) {
            best_val = v;
            best = j;
        }
    }
    // Refine to the root of d|C|^2/dk between the neighbouring grid shifts.
    auto slope = [&](double k) {
        cplx d = 0.0;
        for (int c = 0; c < n3; ++c) d += cplx(0.0, -k3[c]) * A[c] * std::polar(1.0, -k3[c] * k);
        return std::real(std::conj(corr(k)) * d * scale);
    };
    double k = best * h3;
    double lo = k - h3, hi = k + h3;
    if (slope(lo) > 0.0 && slope(hi) < 0.0) {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (slope(mid) > 0.0 ? lo : hi) = mid;
        }
        k = 0.5 * (lo + hi);
    }

    auto evaluate = [&](double shift) {
        OrbitFit fit;
        fit.shift = std::remainder(shift, g.length(2));
        fit.theta = -std::arg(corr(shift));
        const Field w = std::polar(1.0, fit.theta) * shift_x3(uref, shift);
        fit.distance = std::sqrt(h_norm_sq(u - w));
        return fit;
    };
    OrbitFit fit = evaluate(k);
    if (k != 0.0) {
        const OrbitFit at_zero = evaluate(0.0);
        if (at_zero.distance < fit.distance) fit = at_zero;
    }
    return fit;
}

double orbital_distance(const Field& u, const Field& uref) { return orbital_fit(u, uref).distance; }

Field perturb(const Field& u, double eps, std::uint64_t seed) {
    if (eps == 0.0) return u;
    std::mt19937_64 rng(seed);
    const Field v = random_smooth_field(u.grid(), rng);
    const double s = eps * std::sqrt(h_norm_sq(u) / h_norm_sq(v));
    return u + s * v;
}

TrajectorySummary evolve(const Field& u0, const EvolveConfig& cfg, const Field* reference) {
    const Grid3& g = u0.grid();
    cfg.validate(g);
    if (reference && !reference->grid().same_geometry(g)) throw std::invalid_argument("evolve: reference grid mismatch");
    Propagator prop(g, cfg);
    const double amp0 = u0.max_abs();

    TrajectorySummary out;
    auto sample = [&](const Field& u, double t) {
        out.t.push_back(t);
        out.mass.push_back(l2_norm_sq(u));
        out.energy.push_back(sample_energy(u, cfg));
        out.max_amp.push_back(u.max_abs());
        if (reference) out.distance.push_back(orbital_distance(u, *reference));
        const double m0 = out.mass.front(), e0 = out.energy.front();
        if (m0 > 0.0) out.mass_drift = std::max(out.mass_drift, std::abs(out.mass.back() - m0) / m0);
        if (e0 != 0.0) out.energy_drift = std::max(out.energy_drift, std::abs(out.energy.back() - e0) / std::abs(e0));
        if (reference) out.max_distance = std::max(out.max_distance, out.distance.back());
        if (amp0 > 0.0 && out.max_amp.back() > cfg.collapse_amplitude * amp0) {
            out.collapse = true;
            out.collapse_reason = "amplitude";
        } else if (amp0 > 0.0 && spectral_tail(u) > cfg.collapse_tail) {
            out.collapse = true;
            out.collapse_reason = "resolution";
        }
    };

    sample(u0, 0.0);
    if (reference) out.initial_distance = out.distance.front();
    std::vector<cplx> d(u0.data());
    const int total = cfg.steps();
    int done = 0;
    Field u = u0;
    while (done < total && !out.collapse) {
        const int m = std::min(cfg.cadence, total - done);
        prop.run(d, m);
        done += m;
        u = Field(g, d);
        sample(u, done * cfg.dt);
    }
    out.final_state = u;
    return out;
}

}  // namespace nlstrap
