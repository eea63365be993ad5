#include "nlstrap/groundstate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "nlstrap/field_io.hpp"
#include "nlstrap/random_fields.hpp"

namespace nlstrap {

std::string_view to_string(InitKind k) {
    switch (k) {
        case InitKind::gaussian: return "gaussian";
        case InitKind::gaussian_complex_phase: return "gaussian-complex-phase";
        case InitKind::file: return "file";
        case InitKind::random_smooth: return "random-smooth";
    }
    return "?";
}

InitKind parse_init_kind(std::string_view s) {
    if (s == "gaussian") return InitKind::gaussian;
    if (s == "gaussian-complex-phase") return InitKind::gaussian_complex_phase;
    if (s == "file") return InitKind::file;
    if (s == "random-smooth") return InitKind::random_smooth;
    throw std::invalid_argument("unknown init kind '" + std::string(s) + "'");
}

std::string_view to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::interior: return "interior";
        case SolveStatus::boundary_suspect: return "boundary-suspect";
        case SolveStatus::escaped: return "escaped";
        case SolveStatus::vanished: return "vanished";
        case SolveStatus::not_converged: return "not-converged";
    }
    return "?";
}

void SolveConfig::validate() const {
    (void)Exponent::extended(p);
    if (!(r > 0.0)) throw std::invalid_argument("solve: r must be positive");
    if (!(chi > 0.0)) throw std::invalid_argument("solve: chi must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("solve: dt must be positive");
    if (!(dt_max >= dt)) throw std::invalid_argument("solve: dt_max must be >= dt");
    if (!(tol > 0.0)) throw std::invalid_argument("solve: tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("solve: max_iter must be positive");
}

namespace {

Field normalized(const Field& f, double r) {
    const double m = l2_norm_sq(f);
    if (!(m > 0.0)) throw std::invalid_argument("cannot normalize the zero field");
    return f.scaled(r / std::sqrt(m));
}

// Everything one flow iteration needs about the current iterate, from one
// forward and one inverse 3D FFT.
struct Evaluation {
    double l2 = 0.0;
    double kinetic = 0.0;
    double trap = 0.0;
    double lp1 = 0.0;
    double energy = 0.0;
    double lambda = 0.0;
    double residual = 0.0;
    double doth_sq() const { return kinetic + trap; }
};

Evaluation evaluate(const Grid3& g, const std::vector<cplx>& u, double p, bool with_residual) {
    Evaluation ev;
    std::vector<cplx> w(u);
    g.fft3(w, true);
    const auto& k1 = g.wavenumbers(0);
    const auto& k2 = g.wavenumbers(1);
    const auto& k3 = g.wavenumbers(2);
    const double inv_n = 1.0 / static_cast<double>(g.size());
    const double dv = g.cell_volume();
    double kin = 0.0;
    std::size_t idx = 0;
    for (int a = 0; a < g.n(0); ++a)
        for (int b = 0; b < g.n(1); ++b) {
            const double kk = k1[a] * k1[a] + k2[b] * k2[b];
            for (int c = 0; c < g.n(2); ++c, ++idx) {
                const double q = kk + k3[c] * k3[c];
                kin += q * std::norm(w[idx]);
                w[idx] *= q * inv_n;  // now -Laplacian in Fourier space
            }
        }
    ev.kinetic = kin * dv * inv_n;
    const auto& x1 = g.coords(0);
    const auto& x2 = g.coords(1);
    const double half = 0.5 * (p - 1.0);
    double l2 = 0.0, trap = 0.0, lp1 = 0.0;
    idx = 0;
    for (int a = 0; a < g.n(0); ++a)
        for (int b = 0; b < g.n(1); ++b) {
            const double v = x1[a] * x1[a] + x2[b] * x2[b];
            for (int c = 0; c < g.n(2); ++c, ++idx) {
                const double n = std::norm(u[idx]);
                l2 += n;
                trap += v * n;
                if (n > 0.0) lp1 += n * std::pow(n, half);
            }
        }
    ev.l2 = l2 * dv;
    ev.trap = trap * dv;
    ev.lp1 = lp1 * dv;
    ev.energy = 0.5 * ev.doth_sq() - ev.lp1 / (p + 1.0);
    ev.lambda = (ev.doth_sq() - ev.lp1) / ev.l2;
    if (with_residual) {
        g.fft3(w, false);
        double res = 0.0;
        idx = 0;
        for (int a = 0; a < g.n(0); ++a)
            for (int b = 0; b < g.n(1); ++b) {
                const double v = x1[a] * x1[a] + x2[b] * x2[b];
                for (int c = 0; c < g.n(2); ++c, ++idx) {
                    const cplx z = u[idx];
                    const double n = std::norm(z);
                    const double nl = n > 0.0 ? std::pow(n, half) : 0.0;
                    res += std::norm(w[idx] + (v - nl - ev.lambda) * z);
                }
            }
        ev.residual = std::sqrt(res * dv / ev.l2);
    }
    return ev;
}

int heaviest_slice(const Field& u) {
    const Grid3& g = u.grid();
    const int n3 = g.n(2);
    std::vector<double> mass(n3, 0.0);
    for (std::size_t col = 0; col < g.slice_size(); ++col)
        for (int c = 0; c < n3; ++c) mass[c] += std::norm(u[col * n3 + c]);
    return static_cast<int>(std::max_element(mass.begin(), mass.end()) - mass.begin());
}

// Roll the heaviest x3 slice to the box center, unless the slice masses are
// flat (translation-invariant state) to within 1e-10.
Field recentered(const Field& u) {
    const Grid3& g = u.grid();
    const int n3 = g.n(2);
    std::vector<double> mass(n3, 0.0);
    for (std::size_t col = 0; col < g.slice_size(); ++col)
        for (int c = 0; c < n3; ++c) mass[c] += std::norm(u[col * n3 + c]);
    const auto [lo, hi] = std::minmax_element(mass.begin(), mass.end());
    if (*hi - *lo <= 1e-10 * *hi) return u;
    const int c = static_cast<int>(hi - mass.begin());
    return roll_x3(u, n3 / 2 - c);
}

}  // namespace

Field initial_field(const Grid3& grid, const SolveConfig& cfg) {
    const double c = std::pow(std::numbers::pi, -0.75);
    switch (cfg.init) {
        case InitKind::gaussian:
            return normalized(Field::sample(grid, [c](double x1, double x2, double x3) {
                                  return cplx(c * std::exp(-0.5 * (x1 * x1 + x2 * x2 + x3 * x3)), 0.0);
                              }),
                              cfg.r);
        case InitKind::gaussian_complex_phase:
            return normalized(Field::sample(grid, [c](double x1, double x2, double x3) {
                                  return std::polar(c * std::exp(-0.5 * (x1 * x1 + x2 * x2 + x3 * x3)),
                                                    std::sin(x3));
                              }),
                              cfg.r);
        case InitKind::file: {
            Field f = read_field(cfg.init_file);
            if (!f.grid().same_geometry(grid)) throw std::invalid_argument("init file grid mismatch");
            return normalized(Field(grid, f.data()), cfg.r);
        }
        case InitKind::random_smooth: {
            std::mt19937_64 rng(cfg.seed);
            return normalized(random_smooth_field(grid, rng), cfg.r);
        }
    }
    throw std::logic_error("unhandled init kind");
}

GroundStateResult solve(const Grid3& grid, const SolveConfig& cfg, const Field* start) {
    cfg.validate();
    const Exponent p = Exponent::extended(cfg.p);
    const double pv = p.value();
    const TrapHamiltonian H(grid);
    const double h_min = H.lowest_eigenvalue();
    const double mass = cfg.r * cfg.r;

    Field u0 = start ? normalized(Field(grid, start->data()), cfg.r) : initial_field(grid, cfg);
    std::vector<cplx> u(u0.data());
    Evaluation ev = evaluate(grid, u, pv, true);

    GroundStateResult res{u0, 0.0};
    res.energy_history.push_back(ev.energy);
    res.mass_history.push_back(ev.l2);

    double dt = cfg.dt;
    bool escaped = false;
    bool stalled = false;
    int iter = 0;
    const double half = 0.5 * (pv - 1.0);
    std::vector<cplx> w(u.size());

    for (; iter < cfg.max_iter; ++iter) {
        if (std::sqrt(ev.doth_sq()) > cfg.chi) {
            escaped = true;
            break;
        }
        if (ev.residual <= cfg.tol) break;

        bool accepted = false;
        while (!accepted) {
            // Keep 1 + dt (h_min - sigma) >= 1/2 so the implicit operator is positive.
            const double sigma = std::min(ev.lambda, h_min + 0.5 / dt);
            for (std::size_t i = 0; i < u.size(); ++i) {
                const double n = std::norm(u[i]);
                const double nl = n > 0.0 ? std::pow(n, half) : 0.0;
                w[i] = u[i] * (1.0 + dt * nl);
            }
            H.solve_shifted(w, 1.0 - dt * sigma, dt);
            const double m = detail::l2_norm_sq_raw(grid, w);
            const double s = std::sqrt(mass / m);
            for (auto& z : w) z *= s;
            const Evaluation cand = evaluate(grid, w, pv, true);
            const double scale = 0.5 * ev.doth_sq() + ev.lp1 / (pv + 1.0);
            if (std::isfinite(cand.energy) && cand.energy <= ev.energy + 1e-13 * scale) {
                u.swap(w);
                ev = cand;
                accepted = true;
                dt = std::min(2.0 * dt, cfg.dt_max);
            } else {
                ++res.rejected_steps;
                dt *= 0.5;
                if (dt < 1e-12) {
                    stalled = true;
                    break;
                }
            }
        }
        if (stalled) break;
        res.energy_history.push_back(ev.energy);
        res.mass_history.push_back(ev.l2);
    }

    Field out(grid, std::move(u));
    if (cfg.recenter) out = recentered(out);
    res.u = out;
    res.iters = iter;
    res.J = ev.energy;
    res.lambda = ev.lambda;
    res.residual = ev.residual;
    res.doth = std::sqrt(ev.doth_sq());
    res.converged = !escaped && ev.residual <= cfg.tol;
    res.boundary_mass = boundary_mass(out);
    res.boundary_flag = res.boundary_mass > 1e-8;

    if (escaped || res.doth > cfg.chi) {
        res.status = SolveStatus::escaped;
    } else if (res.converged) {
        res.status = res.doth <= cfg.chi * cfg.r * (1.0 + 1e-3) ? SolveStatus::interior
                                                                : SolveStatus::boundary_suspect;
    } else if (gn_ratio(out, p) < 1e-10) {
        res.status = SolveStatus::vanished;
    } else {
        res.status = SolveStatus::not_converged;
    }
    return res;
}

Field el_residual_field(const Field& u, Exponent p, double lambda) {
    const Field g = energy_gradient(u, p);
    return g - u.scaled(lambda);
}

double el_residual(const Field& u, Exponent p, double lambda) {
    const double m = l2_norm_sq(u);
    if (!(m > 0.0)) throw std::invalid_argument("el_residual: zero field");
    return std::sqrt(l2_norm_sq(el_residual_field(u, p, lambda)) / m);
}

// ---------------------------------------------------------------------------

GeometryGap geometry_gap(double r, double chi, double c_hat, Exponent p) {
    if (!(r > 0.0 && chi > 0.0 && c_hat >= 0.0)) throw std::invalid_argument("geometry_gap: bad arguments");
    const double pv = p.value();
    const double eps = 0.5 * (5.0 - pv);
    const double delta = 0.5 * (3.0 * pv - 7.0);
    const double C = c_hat / (pv + 1.0);
    auto f = [&](double s) { return 0.5 * s * s - C * std::pow(r, eps) * std::pow(s, 2.0 + delta); };
    GeometryGap out;
    out.lhs = 0.125 * chi * chi * r * r;
    const double a = chi * r, b = chi;
    if (!(a < b)) {
        // Empty interval: the condition is vacuous only formally; report failure.
        out.rhs = f(a);
        out.holds = false;
        return out;
    }
    // f is unimodal on (0, inf); the infimum over the interval sits at an end,
    // the geometric scan guards against that assumption.
    double m = std::min(f(a), f(b));
    const int samples = 2000;
    const double ratio = std::log(b / a);
    for (int i = 1; i < samples; ++i) m = std::min(m, f(a * std::exp(ratio * i / samples)));
    out.rhs = m;
    out.holds = out.lhs < out.rhs;
    return out;
}

double geometry_threshold(double chi, double c_hat, Exponent p, double r_lo, double r_hi) {
    if (!geometry_gap(r_lo, chi, c_hat, p).holds) return 0.0;
    if (geometry_gap(r_hi, chi, c_hat, p).holds) return r_hi;
    for (int i = 0; i < 200 && r_hi - r_lo > 1e-14 * r_hi; ++i) {
        const double mid = 0.5 * (r_lo + r_hi);
        (geometry_gap(mid, chi, c_hat, p).holds ? r_lo : r_hi) = mid;
    }
    return r_lo;
}

std::vector<SubadditivityRow> subadditivity_check(const std::map<double, GroundStateResult>& results) {
    for (const auto& [r, res] : results) {
        if (res.status != SolveStatus::interior) {
            throw std::invalid_argument("subadditivity_check: result at r = " + std::to_string(r) +
                                        " is not interior");
        }
    }
    std::vector<SubadditivityRow> rows;
    for (auto it = results.begin(); it != results.end(); ++it) {
        for (auto jt = std::next(it); jt != results.end(); ++jt) {
            SubadditivityRow row;
            row.r = it->first;
            row.s = jt->first;
            row.r2_Js = row.r * row.r * jt->second.J;
            row.s2_Jr = row.s * row.s * it->second.J;
            row.holds = row.r2_Js < row.s2_Jr;
            rows.push_back(row);
        }
    }
    return rows;
}

ProfileError profile_error(const Field& u, double r, const OscillatorBasis& basis) {
    if (!(r > 0.0)) throw std::invalid_argument("profile_error: r must be positive");
    const auto phi0 = project_phi0(u, basis);
    const Field d = u - tensor_field(basis, 0, phi0);
    ProfileError out;
    out.err = std::sqrt(kinetic_energy(d) + trap_moment(d));
    out.err_over_r = out.err / r;

    const Grid3& g = u.grid();
    const int n3 = g.n(2);
    const auto& k3 = g.wavenumbers(2);
    const double dz = g.spacing(2);
    double sum = 0.0;
    for (int j = 1; j < basis.size(); ++j) {
        const auto phi = project_mode(u, basis, j);
        // ||phi'||^2 from the 1D DFT (direct sum; n3 is small).
        double grad = 0.0, mass = 0.0;
        for (int m = 0; m < n3; ++m) {
            cplx c = 0.0;
            for (int c3 = 0; c3 < n3; ++c3) c += phi[c3] * std::polar(1.0, -k3[m] * g.coords(2)[c3]);
            grad += k3[m] * k3[m] * std::norm(c);
        }
        for (const auto& z : phi) mass += std::norm(z);
        sum += grad * dz / n3 + basis.eigenvalue(j) * mass * dz;
    }
    out.mode_sum_err = std::sqrt(sum);
    return out;
}

// ---------------------------------------------------------------------------

double SymmetryReport::max_defect() const {
    return std::max({angular, radial_monotonicity, evenness, x3_monotonicity});
}

SymmetryReport symmetry_check(const Field& field) {
    const Grid3& g = field.grid();
    const int n1 = g.n(0), n2 = g.n(1), n3 = g.n(2);
    const auto& x1 = g.coords(0);
    const auto& x2 = g.coords(1);
    const double dv = g.cell_volume();
    const double norm = std::sqrt(l2_norm_sq(field));
    if (!(norm > 0.0)) throw std::invalid_argument("symmetry_check: zero field");

    std::vector<double> a(field.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(field[i]);

    // Rings: plane nodes grouped by x1^2 + x2^2, ordered outward.
    std::vector<std::size_t> order(g.slice_size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> rho2(g.slice_size());
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) rho2[i * n2 + j] = x1[i] * x1[i] + x2[j] * x2[j];
    std::stable_sort(order.begin(), order.end(), [&](auto l, auto r) { return rho2[l] < rho2[r]; });
    const double rtol = 1e-9 * (*std::max_element(rho2.begin(), rho2.end()));
    std::vector<std::size_t> ring_start{0};
    for (std::size_t k = 1; k < order.size(); ++k)
        if (rho2[order[k]] - rho2[order[k - 1]] > rtol) ring_start.push_back(k);
    ring_start.push_back(order.size());

    SymmetryReport rep;
    double ang = 0.0, rad = 0.0;
    for (int c = 0; c < n3; ++c) {
        double prev_mean = 0.0;
        for (std::size_t rg = 0; rg + 1 < ring_start.size(); ++rg) {
            const std::size_t b = ring_start[rg], e = ring_start[rg + 1];
            double mean = 0.0;
            for (std::size_t k = b; k < e; ++k) mean += a[order[k] * n3 + c];
            mean /= static_cast<double>(e - b);
            for (std::size_t k = b; k < e; ++k) {
                const double d = a[order[k] * n3 + c] - mean;
                ang += d * d;
            }
            if (rg > 0 && mean > prev_mean) rad += (mean - prev_mean) * (mean - prev_mean) * (e - b);
            prev_mean = mean;
        }
    }
    rep.angular = std::sqrt(ang * dv) / norm;
    rep.radial_monotonicity = std::sqrt(rad * dv) / norm;

    rep.center_index = heaviest_slice(field);
    auto evenness_about = [&](int c0) {
        double s = 0.0;
        for (std::size_t col = 0; col < g.slice_size(); ++col)
            for (int t = 1; t <= n3 / 2; ++t) {
                const double up = a[col * n3 + (c0 + t) % n3];
                const double dn = a[col * n3 + ((c0 - t) % n3 + n3) % n3];
                s += (up - dn) * (up - dn);
            }
        return std::sqrt(0.5 * s * dv) / norm;
    };
    rep.evenness_raw = evenness_about(n3 / 2);
    rep.evenness = evenness_about(rep.center_index);

    double mono = 0.0;
    const int c0 = rep.center_index;
    for (std::size_t col = 0; col < g.slice_size(); ++col) {
        for (int dir : {1, -1}) {
            for (int t = 0; t < n3 / 2; ++t) {
                const double inner_v = a[col * n3 + ((c0 + dir * t) % n3 + n3) % n3];
                const double outer_v = a[col * n3 + ((c0 + dir * (t + 1)) % n3 + n3) % n3];
                if (outer_v > inner_v) mono += (outer_v - inner_v) * (outer_v - inner_v);
            }
        }
    }
    rep.x3_monotonicity = std::sqrt(mono * dv) / norm;
    return rep;
}

Certificate ground_state_certificate(const Field& u, Exponent p, double chi, double r) {
    if (!p.supercritical()) {
        throw std::invalid_argument("ground_state_certificate: requires p > 1 + 4/3");
    }
    if (!(chi > 0.0 && r > 0.0)) throw std::invalid_argument("ground_state_certificate: bad chi or r");
    const EnergyReport rep = report(u, p);
    const double pv = p.value();
    Certificate c;
    c.pohozaev_ratio = std::abs(rep.pohozaev) / rep.doth_sq;
    c.identity_bound = (3.0 * pv - 7.0) / (6.0 * (pv - 1.0)) * rep.doth_sq;
    c.energy = rep.energy;
    c.level = 0.5 * r * r * kSpectralBottom;
    c.holds = c.pohozaev_ratio <= 1e-2 && c.identity_bound < c.level && c.energy < c.level &&
              std::sqrt(rep.doth_sq) <= chi;
    return c;
}

PhaseReport phase_analysis(const Field& u, double threshold) {
    const double cut = threshold * u.max_abs();
    PhaseReport rep;
    cplx acc = 0.0;
    for (const auto& z : u.values())
        if (std::abs(z) > cut) acc += z * std::abs(z);
    if (std::abs(acc) == 0.0) throw std::invalid_argument("phase_analysis: zero field");
    rep.theta = std::arg(acc);
    const cplx rot = std::polar(1.0, -rep.theta);
    double s = 0.0, s2 = 0.0;
    for (const auto& z : u.values()) {
        if (!(std::abs(z) > cut)) continue;
        const double d = std::arg(z * rot);
        s += d;
        s2 += d * d;
        rep.max_deviation = std::max(rep.max_deviation, std::abs(d));
        ++rep.support;
    }
    const double n = static_cast<double>(rep.support);
    rep.phase_std = std::sqrt(std::max(0.0, s2 / n - (s / n) * (s / n)));
    return rep;
}

Field remove_phase(const Field& u) { return u.scaled(std::polar(1.0, -phase_analysis(u).theta)); }

double estimate_r0(const Grid3& grid, SolveConfig cfg, double r_interior, double r_escaped, int steps) {
    if (!(r_interior < r_escaped)) throw std::invalid_argument("estimate_r0: need r_interior < r_escaped");
    double lo = r_interior, hi = r_escaped;
    for (int i = 0; i < steps; ++i) {
        const double mid = 0.5 * (lo + hi);
        cfg.r = mid;
        const auto res = solve(grid, cfg);
        (res.status == SolveStatus::interior ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace nlstrap
