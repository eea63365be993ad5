#include "nlstrap/sweep.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "nlstrap/csv.hpp"
#include "nlstrap/parallel.hpp"

namespace nlstrap {

ExponentFit fit_loglog(std::string name, std::span<const double> x, std::span<const double> y, double target) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_loglog: size mismatch");
    ExponentFit f;
    f.name = std::move(name);
    f.target = target;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    f.points = static_cast<int>(lx.size());
    if (f.points < 2) return f;
    const double n = f.points;
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < f.points; ++i) {
        mx += lx[i] / n;
        my += ly[i] / n;
    }
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < f.points; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) return f;
    f.slope = sxy / sxx;
    double ssr = 0.0;
    for (int i = 0; i < f.points; ++i) {
        const double e = ly[i] - (my + f.slope * (lx[i] - mx));
        ssr += e * e;
    }
    f.rms_residual = std::sqrt(ssr / n);
    if (f.points > 2) f.stderr_slope = std::sqrt(ssr / (n - 2) / sxx);
    f.sufficient = true;
    return f;
}

SweepRow make_sweep_row(const GroundStateResult& res, double r, Exponent p, const OscillatorBasis& basis) {
    SweepRow row;
    row.r = r;
    row.J = res.J;
    row.lambda = res.lambda;
    row.doth = res.doth;
    row.residual = res.residual;
    row.status = res.status;
    row.profile_err = profile_error(res.u, r, basis).err;
    const ModeMasses mm = mode_masses(res.u, basis);
    row.mode_tail = (mm.total - mm.masses.at(0)) / (r * r);
    const EnergyReport rep = report(res.u, p);
    row.pohozaev = std::abs(rep.pohozaev) / rep.doth_sq;
    return row;
}

std::vector<ExponentFit> sweep_fits(std::span<const SweepRow> rows, double p) {
    std::vector<double> r, gap, err, tail;
    for (const auto& row : rows) {
        if (row.status != SolveStatus::interior) continue;
        r.push_back(row.r);
        gap.push_back(kSpectralBottom - row.lambda);
        err.push_back(row.profile_err / row.r);
        tail.push_back(row.mode_tail);
    }
    return {fit_loglog("two_minus_lambda", r, gap, p - 1.0),
            fit_loglog("profile_err_over_r", r, err, 0.5 * (p - 1.0)),
            fit_loglog("mode_tail", r, tail, p - 1.0)};
}

SweepOutput run_sweep(const Grid3& grid, const SolveConfig& base, std::span<const double> r_list, int jobs) {
    if (r_list.empty()) throw std::invalid_argument("run_sweep: empty r list");
    for (std::size_t i = 0; i < r_list.size(); ++i) {
        if (!(r_list[i] > 0.0)) throw std::invalid_argument("run_sweep: r must be positive");
        if (i > 0 && !(r_list[i] > r_list[i - 1])) throw std::invalid_argument("run_sweep: r list must be strictly increasing");
    }
    base.validate();
    const Exponent p = Exponent::extended(base.p);
    const OscillatorBasis basis = build_basis(grid, default_mode_cutoff(grid));

    auto results = parallel_map(jobs, r_list.size(), [&](std::size_t i) {
        SolveConfig c = base;
        c.r = r_list[i];
        return solve(grid, c);
    });
    auto rows = parallel_map(jobs, r_list.size(),
                             [&](std::size_t i) { return make_sweep_row(results[i], r_list[i], p, basis); });

    SweepOutput out{SweepTable{base.p, std::move(rows), {}}, std::move(results)};
    out.table.fits = sweep_fits(out.table.rows, base.p);
    return out;
}

void write_sweep_csv(std::ostream& os, const SweepTable& t) {
    using csv::num;
    os << "r,J,lambda,doth,residual,status,profile_err,mode_tail,pohozaev\n";
    for (const auto& row : t.rows)
        os << num(row.r) << ',' << num(row.J) << ',' << num(row.lambda) << ',' << num(row.doth) << ','
           << num(row.residual) << ',' << to_string(row.status) << ',' << num(row.profile_err) << ','
           << num(row.mode_tail) << ',' << num(row.pohozaev) << '\n';
    os << '\n' << "fit,slope,stderr,rms_residual,target,points,status\n";
    for (const auto& f : t.fits)
        os << f.name << ',' << num(f.slope) << ',' << num(f.stderr_slope) << ',' << num(f.rms_residual) << ','
           << num(f.target) << ',' << f.points << ',' << (f.sufficient ? "ok" : "insufficient-data") << '\n';
}

}  // namespace nlstrap
