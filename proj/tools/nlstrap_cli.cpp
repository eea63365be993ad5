#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nlstrap/config.hpp"
#include "nlstrap/csv.hpp"
#include "nlstrap/dynamics.hpp"
#include "nlstrap/field_io.hpp"
#include "nlstrap/groundstate.hpp"
#include "nlstrap/oscillator.hpp"
#include "nlstrap/rearrange.hpp"
#include "nlstrap/sweep.hpp"
#include "nlstrap/verify.hpp"

namespace fs = std::filesystem;
using namespace nlstrap;
using csv::num;

namespace {

constexpr int kChecksFailed = 1;
constexpr int kUsageError = 2;

struct Binding {
    CLI::Option* option;
    std::string key;
    std::string value;
};

void emit(const RunConfig& cfg, const std::string& name, const std::string& text) {
    const fs::path path = cfg.output_path(name);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
    std::cout << text;
}

std::string output_name(const RunConfig& cfg, const std::string& fallback) {
    return cfg.get("out").empty() ? fallback : cfg.get("out");
}

int cmd_spectrum(const RunConfig& cfg) {
    const Grid3 g = cfg.grid();
    const int J = cfg.integer("modes") > 0 ? cfg.integer("modes") : default_mode_cutoff(g);
    const OscillatorBasis basis = build_basis(g, J);
    std::ostringstream os;
    os << "j,m,n,lambda\n";
    for (int j = 0; j < basis.size(); ++j)
        os << j << ',' << basis.index(j).m << ',' << basis.index(j).n << ',' << num(basis.eigenvalue(j)) << '\n';
    emit(cfg, output_name(cfg, "spectrum.csv"), os.str());
    return 0;
}

int cmd_groundstate(const RunConfig& cfg) {
    const Grid3 g = cfg.grid();
    const SolveConfig sc = cfg.solve_config();
    std::optional<Field> start;
    if (sc.init == InitKind::file) {
        start = read_field(fs::path(sc.init_file));
        if (!start->grid().same_geometry(g)) throw std::invalid_argument("init_file grid differs from --grid/--box");
    }
    const GroundStateResult res = solve(g, sc, start ? &*start : nullptr);
    if (!cfg.get("out").empty()) {
        const fs::path path = cfg.output_path(cfg.get("out"));
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        write_field(path, res.u);
    }
    const EnergyReport rep = report(res.u, Exponent::extended(sc.p));
    std::cout << "p,r,chi,J,lambda,residual,doth,l2_sq,kinetic,trap,lp1,pohozaev,iters,status\n"
              << num(sc.p) << ',' << num(sc.r) << ',' << num(sc.chi) << ',' << num(res.J) << ',' << num(res.lambda)
              << ',' << num(res.residual) << ',' << num(res.doth) << ',' << num(rep.l2_sq) << ',' << num(rep.kinetic)
              << ',' << num(rep.trap) << ',' << num(rep.lp1) << ',' << num(rep.pohozaev) << ',' << res.iters << ','
              << to_string(res.status) << '\n';
    return res.status == SolveStatus::interior ? 0 : kChecksFailed;
}

int cmd_sweep(const RunConfig& cfg) {
    const auto rs = cfg.list("r_list");
    const SweepOutput out = run_sweep(cfg.grid(), cfg.solve_config(), rs, cfg.jobs());
    std::ostringstream os;
    write_sweep_csv(os, out.table);
    emit(cfg, output_name(cfg, "sweep.csv"), os.str());
    for (const auto& row : out.table.rows)
        if (row.status != SolveStatus::interior) return kChecksFailed;
    return 0;
}

int cmd_evolve(const RunConfig& cfg) {
    const Field ref = read_field(fs::path(cfg.get("in")));
    const EvolveConfig ec = cfg.evolve_config();
    const Field u0 = perturb(ref, cfg.number("perturb"), static_cast<std::uint64_t>(cfg.integer("seed")));
    const TrajectorySummary tr = evolve(u0, ec, &ref);
    std::ostringstream os;
    os << "t,mass,energy,d,maxamp\n";
    for (std::size_t i = 0; i < tr.t.size(); ++i)
        os << num(tr.t[i]) << ',' << num(tr.mass[i]) << ',' << num(tr.energy[i]) << ',' << num(tr.distance[i]) << ','
           << num(tr.max_amp[i]) << '\n';
    emit(cfg, output_name(cfg, "trajectory.csv"), os.str());
    std::cerr << "mass_drift " << num(tr.mass_drift) << "  energy_drift " << num(tr.energy_drift) << "  d0 "
              << num(tr.initial_distance) << "  max_d " << num(tr.max_distance)
              << (tr.collapse ? "  collapse (" + tr.collapse_reason + ")" : std::string()) << '\n';
    return tr.collapse ? kChecksFailed : 0;
}

int cmd_verify(const RunConfig& cfg) {
    VerifyOptions opt;
    opt.solve = cfg.solve_config();
    opt.gn_count = cfg.integer("gn_count");
    opt.stability_t = cfg.number("stability_t");
    opt.stability_eps = cfg.number("stability_eps");
    opt.evolve_dt = cfg.number("evolve_dt");
    opt.jobs = cfg.jobs();
    std::optional<Grid3> grid;
    if (!cfg.get("in").empty()) {
        opt.field = read_field(fs::path(cfg.get("in")));
        grid = opt.field->grid();
    } else {
        grid = cfg.grid();
    }
    const VerifyReport rep = verify_all(*grid, opt);
    std::ostringstream os;
    write_verify_csv(os, rep);
    emit(cfg, output_name(cfg, "verify.csv"), os.str());
    return rep.all_pass() ? 0 : kChecksFailed;
}

int cmd_rearrange(const RunConfig& cfg) {
    const Field u = read_field(fs::path(cfg.get("in")));
    const double q = cfg.number("p") + 1.0;
    const Field planes = rearrange_planes(u);
    const Field both = rearrange_lines(planes);
    const fs::path field_out = cfg.output_path(cfg.get("out").empty() ? "rearranged.nls3" : cfg.get("out"));
    if (field_out.has_parent_path()) fs::create_directories(field_out.parent_path());
    write_field(field_out, both);

    const TrapMomentCheck tm = trap_moment_check(u);
    const NormCheck nc = norm_preservation_check(u, q);
    const KineticCheck kc = kinetic_check(u);
    const RigidityReport rr = equality_rigidity_probe(u);
    const double idem = std::sqrt(l2_norm_sq(rearrange_planes(planes) - planes)) +
                        std::sqrt(l2_norm_sq(rearrange_lines(both) - both));

    std::ostringstream os;
    bool ok = true;
    auto row = [&](const std::string& name, double value, double reference, const char* status) {
        os << name << ',' << num(value) << ',' << num(reference) << ',' << status << '\n';
    };
    auto check = [&](const std::string& name, double value, double reference, bool pass) {
        row(name, value, reference, pass ? "pass" : "fail");
        ok = ok && pass;
    };
    os << "check,value,reference,pass\n";
    check("trap_moment", tm.after, tm.before, tm.holds);
    check("l2_norm_sq", nc.l2_after, nc.l2_before, nc.holds);
    check("lq_integral", nc.lq_after, nc.lq_before, nc.holds);
    if (kc.applicable) {
        check("kinetic_planes", kc.after_planes, kc.before, kc.holds);
        check("kinetic_lines", kc.after_lines, kc.before, kc.holds);
    } else {
        row("kinetic_planes", kc.after_planes, kc.before, "n/a");
        row("kinetic_lines", kc.after_lines, kc.before, "n/a");
    }
    check("rigidity_violations", rr.violations, 0.0, rr.violations == 0);
    row("rigidity_strict_planes", rr.strict, rr.planes, "info");
    row("rigidity_tied_planes", rr.tied, rr.planes, "info");
    check("idempotence", idem, 0.0, idem == 0.0);
    emit(cfg, "rearrange.csv", os.str());
    return ok ? 0 : kChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained ground states, dynamics and rearrangement checks for the partially trapped 3D NLS"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_file;
    bool print_config = false;
    std::vector<Binding> bindings;
    bindings.reserve(64);
    auto bind = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
        bindings.push_back({nullptr, key, {}});
        bindings.back().option = sub->add_option(flag, bindings.back().value, help);
    };

    app.add_option("--config", config_file, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_flag("--print-config", print_config, "print the effective configuration and exit");
    bind(&app, "--out-dir", "out_dir", "directory for output files");
    bind(&app, "--jobs", "jobs", "worker threads for independent solves");
    bind(&app, "--seed", "seed", "RNG seed");

    auto solver_flags = [&](CLI::App* sub) {
        bind(sub, "--p", "p", "nonlinearity exponent");
        bind(sub, "--r", "r", "L2 norm (mass r^2)");
        bind(sub, "--chi", "chi", "radius of the monitored Hdot ball");
        bind(sub, "--grid", "grid", "n1,n2,n3");
        bind(sub, "--box", "box", "L1,L2,L3");
        bind(sub, "--dt", "dt", "initial flow step");
        bind(sub, "--tol", "tol", "relative Euler-Lagrange residual tolerance");
        bind(sub, "--max-iter", "max_iter", "iteration cap");
        bind(sub, "--init", "init", "gaussian | gaussian-complex-phase | file | random-smooth");
        bind(sub, "--init-file", "init_file", "field file for --init file");
    };

    auto* spectrum = app.add_subcommand("spectrum", "print the transverse oscillator spectrum (j, m, n, lambda)");
    bind(spectrum, "--grid", "grid", "n1,n2,n3");
    bind(spectrum, "--box", "box", "L1,L2,L3");
    bind(spectrum, "--modes", "modes", "number of modes (0: all resolved shells)");
    bind(spectrum, "--out", "out", "CSV file name");

    auto* groundstate = app.add_subcommand("groundstate", "solve for a constrained minimizer");
    solver_flags(groundstate);
    bind(groundstate, "--out", "out", "field file to write");

    auto* sweep = app.add_subcommand("sweep", "solve over a list of r and fit the small-r exponents");
    solver_flags(sweep);
    bind(sweep, "--r-list", "r_list", "comma-separated, strictly increasing");
    bind(sweep, "--out", "out", "CSV file name");

    auto* evolve_cmd = app.add_subcommand("evolve", "propagate a field in real time");
    bind(evolve_cmd, "--in", "in", "input field file");
    bind(evolve_cmd, "--p", "p", "nonlinearity exponent");
    bind(evolve_cmd, "--dt", "evolve_dt", "time step");
    bind(evolve_cmd, "--t-final", "t_final", "final time");
    bind(evolve_cmd, "--cadence", "cadence", "steps between samples");
    bind(evolve_cmd, "--perturb", "perturb", "relative H-norm size of a random smooth perturbation");
    bind(evolve_cmd, "--out", "out", "trajectory CSV file name");
    bool no_trap = false;
    evolve_cmd->add_flag("--no-trap", no_trap, "diagnostic mode with the trap removed");

    auto* verify = app.add_subcommand("verify", "run the claim battery on a field file or a fresh solve");
    solver_flags(verify);
    bind(verify, "--in", "in", "field file (default: fresh solve)");
    bind(verify, "--gn-count", "gn_count", "GN calibration corpus size");
    bind(verify, "--stability-t", "stability_t", "horizon of the stability run");
    bind(verify, "--stability-eps", "stability_eps", "relative H-norm perturbation");
    bind(verify, "--out", "out", "CSV file name");

    auto* rearrange = app.add_subcommand("rearrange", "rearrange a field and check the inequalities");
    bind(rearrange, "--in", "in", "input field file");
    bind(rearrange, "--p", "p", "exponent for the L^{p+1} check");
    bind(rearrange, "--out", "out", "rearranged field file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        RunConfig cfg;
        if (!config_file.empty()) cfg.load_file(config_file);
        for (const auto& b : bindings)
            if (b.option->count() > 0) cfg.set(b.key, b.value);
        if (no_trap) cfg.set("trap", "false");

        if (print_config) {
            std::cout << cfg.dump();
            return 0;
        }
        const std::string name = app.get_subcommands().front()->get_name();
        cfg.validate(name);
        if (name == "spectrum") return cmd_spectrum(cfg);
        if (name == "groundstate") return cmd_groundstate(cfg);
        if (name == "sweep") return cmd_sweep(cfg);
        if (name == "evolve") return cmd_evolve(cfg);
        if (name == "verify") return cmd_verify(cfg);
        if (name == "rearrange") return cmd_rearrange(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return kUsageError;
}
