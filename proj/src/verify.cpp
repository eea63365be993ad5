#include "nlstrap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <random>

#include "nlstrap/csv.hpp"
#include "nlstrap/dynamics.hpp"
#include "nlstrap/parallel.hpp"
#include "nlstrap/random_fields.hpp"
#include "nlstrap/rearrange.hpp"

namespace nlstrap {

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::pass: return "pass";
        case Outcome::fail: return "fail";
        case Outcome::not_applicable: return "n/a";
    }
    return "?";
}

bool VerifyReport::all_pass() const {
    for (const auto& r : rows)
        if (r.outcome == Outcome::fail) return false;
    return true;
}

const ClaimRow* VerifyReport::find(const std::string& id) const {
    for (const auto& r : rows)
        if (r.id == id) return &r;
    return nullptr;
}

Field center_x3(const Field& u) {
    const Grid3& g = u.grid();
    const int n3 = g.n(2);
    std::vector<double> mass(n3, 0.0);
    for (std::size_t col = 0; col < g.slice_size(); ++col)
        for (int c = 0; c < n3; ++c) mass[c] += std::norm(u[col * n3 + c]);
    int best = 0;
    for (int c = 1; c < n3; ++c)
        if (mass[c] > mass[best]) best = c;
    return roll_x3(u, n3 / 2 - best);
}

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string bound(const char* rel, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s %.6g", rel, v);
    return buf;
}

// Wraps a field that was not produced by the solver into a result record.
GroundStateResult assess(const Field& u, const SolveConfig& cfg, Exponent p) {
    const EnergyReport rep = report(u, p);
    GroundStateResult res{u, rep.energy};
    res.lambda = rep.lambda.value_or(kNaN);
    res.residual = el_residual(u, p, res.lambda);
    res.doth = std::sqrt(rep.doth_sq);
    res.converged = res.residual <= cfg.tol;
    const double r = std::sqrt(rep.l2_sq);
    if (res.doth > cfg.chi) {
        res.status = SolveStatus::escaped;
    } else if (res.converged) {
        res.status = res.doth <= cfg.chi * r * (1.0 + 1e-3) ? SolveStatus::interior : SolveStatus::boundary_suspect;
    } else {
        res.status = SolveStatus::not_converged;
    }
    res.boundary_mass = boundary_mass(u);
    res.boundary_flag = res.boundary_mass > 1e-8;
    return res;
}

double relative_l2(const Field& a, const Field& b) { return std::sqrt(l2_norm_sq(a - b) / l2_norm_sq(b)); }

}  // namespace

VerifyReport verify_all(const Grid3& grid, const VerifyOptions& opt) {
    opt.solve.validate();
    const Exponent p = Exponent::extended(opt.solve.p);
    const bool supercritical = p.supercritical();
    const bool standard = p.in_standard_range();

    double r = opt.solve.r;
    if (opt.field) {
        if (!opt.field->grid().same_geometry(grid)) throw std::invalid_argument("verify: field grid mismatch");
        r = std::sqrt(l2_norm_sq(*opt.field));
        if (!(r > 0.0)) throw std::invalid_argument("verify: zero field");
    }
    const std::vector<double> radii = {0.5 * r, r, 2.0 * r};
    auto results = parallel_map(opt.jobs, radii.size(), [&](std::size_t i) {
        SolveConfig c = opt.solve;
        c.r = radii[i];
        if (i == 1 && opt.field) return assess(*opt.field, c, p);
        return solve(grid, c);
    });
    const GroundStateResult& main = results[1];
    const Field& u = main.u;
    const EnergyReport rep = report(u, p);

    VerifyReport out;
    auto add = [&](std::string id, std::string anchor, double value, std::string threshold, bool ok) {
        out.rows.push_back({std::move(id), std::move(anchor), value, std::move(threshold), ok ? Outcome::pass : Outcome::fail});
    };
    auto skip = [&](std::string id, std::string anchor, std::string threshold) {
        out.rows.push_back({std::move(id), std::move(anchor), kNaN, std::move(threshold), Outcome::not_applicable});
    };
    const bool interior = main.status == SolveStatus::interior;

    {
        const double dev = std::abs(rep.l2_sq - opt.solve.r * opt.solve.r) / (opt.solve.r * opt.solve.r);
        if (opt.field)
            skip("mass_constraint", "minimizer lies on S_r: ||u||^2 = r^2", "<= 1e-10");
        else
            add("mass_constraint", "minimizer lies on S_r: ||u||^2 = r^2", dev, "<= 1e-10", dev <= 1e-10);
    }
    add("el_residual", "Euler-Lagrange equation -Lap u + (x1^2+x2^2)u - |u|^{p-1}u = lambda u", main.residual,
        bound("<=", opt.solve.tol), main.residual <= opt.solve.tol);
    add("minimizer_status", "minimizer found inside B_chi (status interior)", interior ? 1.0 : 0.0, "== 1", interior);

    // Corpora for the field-independent inequalities.
    {
        std::mt19937_64 rng(opt.solve.seed + 1000);
        double worst_conf = 2.0 * rep.l2_sq / rep.doth_sq;
        double worst_gn = 0.0;
        const GnCalibration cal = calibrate_gn_constant(grid, p, opt.gn_count, opt.solve.seed);
        for (int i = 0; i < opt.corpus; ++i) {
            const Field f = random_smooth_field(grid, rng);
            const double l2 = l2_norm_sq(f);
            const double doth = kinetic_energy(f) + trap_moment(f);
            worst_conf = std::max(worst_conf, 2.0 * l2 / doth);
            worst_gn = std::max(worst_gn, gn_ratio(f, p));
        }
        add("confinement_lower_bound", "2 int |u|^2 <= ||u||_Hdot^2 for every u (minimizer and random corpus)", worst_conf,
            "<= 1.00000001", worst_conf <= 1.0 + 1e-8);
        add("gn_corpus", "Gagliardo-Nirenberg ratio of held-out fields <= calibrated corpus maximum C_hat", worst_gn / cal.c_hat,
            "<= 1", worst_gn <= cal.c_hat);

        if (p.value() >= Exponent::kMassCritical - 1e-12) {
            const GeometryGap gap = geometry_gap(r, opt.solve.chi, cal.c_hat, p);
            add("geometry_gap", "E has a geometry of local minima: g_r(chi r / 2) < inf f_r on (chi r, chi)",
                gap.lhs / gap.rhs, "< 1", gap.holds);
        } else {
            skip("geometry_gap", "E has a geometry of local minima: g_r(chi r / 2) < inf f_r on (chi r, chi)", "< 1");
        }
    }

    add("energy_upper_bound", "J_r^chi < r^2 Lambda0 / 2 = r^2", main.J / (r * r), "< 1", main.J < r * r);
    {
        const double ratio = main.doth / (opt.solve.chi * r);
        add("containment", "minimizers lie in B_{chi r}: ||u||_Hdot <= chi r", ratio, "<= 1.001", ratio <= 1.0 + 1e-3);
    }
    add("multiplier_window", "lambda < Lambda0 = 2", main.lambda, "< 2", main.lambda < kSpectralBottom);
    {
        const bool all_interior = std::all_of(results.begin(), results.end(),
                                              [](const auto& res) { return res.status == SolveStatus::interior; });
        const double d = std::min(results[0].lambda - results[1].lambda, results[1].lambda - results[2].lambda);
        add("multiplier_ordering", "lambda increases to Lambda0 as r decreases (r/2, r, 2r)", all_interior ? d : kNaN,
            "> 0", all_interior && d > 0.0);

        double worst = kNaN;
        bool ok = all_interior;
        if (all_interior) {
            std::map<double, GroundStateResult> by_r;
            for (std::size_t i = 0; i < radii.size(); ++i) by_r.emplace(radii[i], results[i]);
            for (const auto& row : subadditivity_check(by_r)) {
                const double margin = (row.s2_Jr - row.r2_Js) / std::abs(row.s2_Jr);
                worst = std::isnan(worst) ? margin : std::min(worst, margin);
                ok = ok && row.holds;
            }
        }
        add("strict_subadditivity", "r^2 J_s < s^2 J_r for r < s", worst, "> 0", ok);
    }

    const Field centered = center_x3(remove_phase(u));
    {
        const SymmetryReport sym = symmetry_check(centered);
        add("symmetry", "radially symmetric and decreasing in (x1,x2), even and decreasing in x3", sym.max_defect(),
            "<= 1e-04", sym.max_defect() <= 1e-4);

        const Field a = centered.abs();
        const double dev = std::max(relative_l2(rearrange_planes(centered), a), relative_l2(rearrange_lines(centered), a));
        add("rearrangement_fixed_point", "minimizer equals its Schwarz and x3 rearrangements", dev, "<= 1e-04",
            dev <= 1e-4);

        const TrapMomentCheck tm = trap_moment_check(u);
        add("trap_moment_rearrangement", "int V |u*|^2 <= int V |u|^2 on every slice", tm.after / tm.before, "<= 1",
            tm.holds);

        const NormCheck nc = norm_preservation_check(u, p.value() + 1.0);
        const double dev_n = std::max(std::abs(nc.l2_after - nc.l2_before) / nc.l2_before,
                                      std::abs(nc.lq_after - nc.lq_before) / nc.lq_before);
        add("equimeasurability", "rearrangement preserves int |u|^2 and int |u|^{p+1}", dev_n, "<= 1e-12", nc.holds);
    }
    {
        const PhaseReport ph = phase_analysis(u);
        add("phase_rigidity", "minimizer is of the form e^{i theta} f with f >= 0", ph.phase_std, "<= 1e-06",
            ph.phase_std <= 1e-6);
    }

    const char* poh_anchor = "Pohozaev identity P(u) = 0 at local minimizers (ground-state certificate)";
    if (supercritical) {
        const Certificate cert = ground_state_certificate(u, p, opt.solve.chi, r);
        add("pohozaev_certificate", poh_anchor, cert.pohozaev_ratio, "<= 1e-02", cert.holds);
    } else {
        skip("pohozaev_certificate", poh_anchor, "<= 1e-02");
    }

    const char* st_anchor = "the set M_r^chi is stable (bounded orbital distance, finite horizon)";
    if (standard) {
        EvolveConfig ec;
        ec.p = p.value();
        ec.dt = opt.evolve_dt;
        ec.t_final = opt.stability_t;
        ec.cadence = std::max(1, static_cast<int>(std::lround(0.25 / opt.evolve_dt)));
        const Field u0 = perturb(u, opt.stability_eps, opt.solve.seed);
        const TrajectorySummary tr = evolve(u0, ec, &u);
        const double amp = tr.initial_distance > 0.0 ? tr.max_distance / tr.initial_distance : tr.max_distance;
        add("stability_distance", st_anchor, amp, "<= 5", amp <= 5.0 && !tr.collapse);
        add("stability_mass_drift", "mass conservation along the flow", tr.mass_drift, "<= 1e-10", tr.mass_drift <= 1e-10);
        add("stability_energy_drift", "energy conservation along the flow", tr.energy_drift, "<= 1e-06",
            tr.energy_drift <= 1e-6);
    } else {
        skip("stability_distance", st_anchor, "<= 5");
        skip("stability_mass_drift", "mass conservation along the flow", "<= 1e-10");
        skip("stability_energy_drift", "energy conservation along the flow", "<= 1e-06");
    }
    return out;
}

void write_verify_csv(std::ostream& os, const VerifyReport& rep) {
    os << "claim_id,anchor,value,threshold,pass\n";
    for (const auto& r : rep.rows)
        os << r.id << ',' << csv::field(r.anchor) << ',' << csv::num(r.value) << ',' << csv::field(r.threshold) << ','
           << to_string(r.outcome) << '\n';
}

}  // namespace nlstrap
