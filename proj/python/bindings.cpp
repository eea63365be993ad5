#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <sstream>

#include "nlstrap/dynamics.hpp"
#include "nlstrap/energy.hpp"
#include "nlstrap/field_io.hpp"
#include "nlstrap/groundstate.hpp"
#include "nlstrap/oscillator.hpp"
#include "nlstrap/rearrange.hpp"
#include "nlstrap/sweep.hpp"
#include "nlstrap/verify.hpp"

namespace py = pybind11;
using namespace nlstrap;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;
using DArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Field to_field(const Grid3& g, const CArray& a) {
    if (a.ndim() != 3 || a.shape(0) != g.n(0) || a.shape(1) != g.n(1) || a.shape(2) != g.n(2))
        throw std::invalid_argument("array shape does not match the grid");
    return Field(g, std::vector<cplx>(a.data(), a.data() + a.size()));
}

CArray to_array(const Field& f) {
    const Grid3& g = f.grid();
    CArray out({g.n(0), g.n(1), g.n(2)});
    std::copy(f.data().begin(), f.data().end(), out.mutable_data());
    return out;
}

py::dict report_dict(const EnergyReport& r) {
    py::dict d;
    d["p"] = r.p;
    d["l2_sq"] = r.l2_sq;
    d["kinetic"] = r.kinetic;
    d["trap"] = r.trap;
    d["doth_sq"] = r.doth_sq;
    d["lp1"] = r.lp1;
    d["energy"] = r.energy;
    d["lambda"] = r.lambda ? py::cast(*r.lambda) : py::none();
    d["pohozaev"] = r.pohozaev;
    return d;
}

SolveConfig solve_config(double p, double r, double chi, double tol, int max_iter, const std::string& init,
                         std::uint64_t seed) {
    SolveConfig c;
    c.p = p;
    c.r = r;
    c.chi = chi;
    c.tol = tol;
    c.max_iter = max_iter;
    c.init = parse_init_kind(init);
    c.seed = seed;
    return c;
}

}  // namespace

PYBIND11_MODULE(_nlstrap, m) {
    m.doc() = "Constrained ground states of the partially trapped 3D NLS";

    py::register_exception<FieldIoError>(m, "FieldIoError", PyExc_IOError);

    py::class_<Grid3>(m, "Grid")
        .def(py::init([](std::array<int, 3> n, std::array<double, 3> L) { return Grid3(n, L); }), py::arg("n"),
             py::arg("lengths"))
        .def_property_readonly("counts", &Grid3::counts)
        .def_property_readonly("lengths", &Grid3::lengths)
        .def_property_readonly("cell_volume", &Grid3::cell_volume)
        .def("coords", [](const Grid3& g, int axis) { return g.coords(axis); })
        .def("wavenumbers", [](const Grid3& g, int axis) { return g.wavenumbers(axis); })
        .def("__repr__", [](const Grid3& g) {
            std::ostringstream os;
            os << "Grid(n=(" << g.n(0) << ", " << g.n(1) << ", " << g.n(2) << "), lengths=(" << g.length(0) << ", "
               << g.length(1) << ", " << g.length(2) << "))";
            return os.str();
        });

    m.def("desk_grid", [] { return make_grid(32, 32, 64, 16, 16, 32); });

    m.def("report", [](const Grid3& g, const CArray& u, double p) {
        return report_dict(report(to_field(g, u), Exponent::extended(p)));
    }, py::arg("grid"), py::arg("u"), py::arg("p") = 3.0);
    m.def("energy", [](const Grid3& g, const CArray& u, double p) { return energy(to_field(g, u), Exponent::extended(p)); },
          py::arg("grid"), py::arg("u"), py::arg("p") = 3.0);
    m.def("gn_ratio", [](const Grid3& g, const CArray& u, double p) { return gn_ratio(to_field(g, u), Exponent::extended(p)); },
          py::arg("grid"), py::arg("u"), py::arg("p") = 3.0);
    m.def("laplacian", [](const Grid3& g, const CArray& u) { return to_array(laplacian(to_field(g, u))); });
    m.def("shift_x3", [](const Grid3& g, const CArray& u, double k) { return to_array(shift_x3(to_field(g, u), k)); });
    m.def("l2_norm_sq", [](const Grid3& g, const CArray& u) { return l2_norm_sq(to_field(g, u)); });
    m.def("rayleigh_quotient", [](const Grid3& g, const CArray& u) { return rayleigh_quotient(to_field(g, u)); });

    m.def("spectrum", [](const Grid3& g, int modes) {
        const OscillatorBasis b = build_basis(g, modes > 0 ? modes : default_mode_cutoff(g));
        std::vector<std::tuple<int, int, int, double>> rows;
        for (int j = 0; j < b.size(); ++j) rows.emplace_back(j, b.index(j).m, b.index(j).n, b.eigenvalue(j));
        return rows;
    }, py::arg("grid"), py::arg("modes") = 0);

    m.def("solve", [](const Grid3& g, double p, double r, double chi, double tol, int max_iter, const std::string& init,
                      std::uint64_t seed) {
        const SolveConfig cfg = solve_config(p, r, chi, tol, max_iter, init, seed);
        std::optional<GroundStateResult> out;
        {
            py::gil_scoped_release release;
            out.emplace(solve(g, cfg));
        }
        const GroundStateResult& res = *out;
        py::dict d;
        d["u"] = to_array(res.u);
        d["J"] = res.J;
        d["lambda"] = res.lambda;
        d["residual"] = res.residual;
        d["doth"] = res.doth;
        d["iters"] = res.iters;
        d["status"] = std::string(to_string(res.status));
        d["energy_history"] = res.energy_history;
        return d;
    }, py::arg("grid"), py::arg("p") = 3.0, py::arg("r") = 0.1, py::arg("chi") = 4.0, py::arg("tol") = 1e-8,
       py::arg("max_iter") = 20000, py::arg("init") = "gaussian", py::arg("seed") = 1);

    m.def("evolve", [](const Grid3& g, const CArray& u0, double p, double dt, double t_final, int cadence, bool trap,
                       std::optional<CArray> reference) {
        EvolveConfig c;
        c.p = p;
        c.dt = dt;
        c.t_final = t_final;
        c.cadence = cadence;
        c.trap = trap;
        const Field f = to_field(g, u0);
        std::optional<Field> ref;
        if (reference) ref = to_field(g, *reference);
        TrajectorySummary tr;
        {
            py::gil_scoped_release release;
            tr = evolve(f, c, ref ? &*ref : nullptr);
        }
        py::dict d;
        d["t"] = tr.t;
        d["mass"] = tr.mass;
        d["energy"] = tr.energy;
        d["distance"] = tr.distance;
        d["max_amp"] = tr.max_amp;
        d["mass_drift"] = tr.mass_drift;
        d["energy_drift"] = tr.energy_drift;
        d["collapse"] = tr.collapse;
        d["final"] = to_array(*tr.final_state);
        return d;
    }, py::arg("grid"), py::arg("u0"), py::arg("p") = 3.0, py::arg("dt") = 0.005, py::arg("t_final") = 1.0,
       py::arg("cadence") = 20, py::arg("trap") = true, py::arg("reference") = py::none());

    m.def("orbital_distance", [](const Grid3& g, const CArray& u, const CArray& uref) {
        return orbital_distance(to_field(g, u), to_field(g, uref));
    });

    m.def("schwarz2d", [](const DArray& a, double h1, double h2) {
        if (a.ndim() != 2) throw std::invalid_argument("expected a 2D array");
        Slice2 s{static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)), h1, h2,
                 std::vector<double>(a.data(), a.data() + a.size())};
        const Slice2 out = schwarz2d(s);
        DArray r({a.shape(0), a.shape(1)});
        std::copy(out.values.begin(), out.values.end(), r.mutable_data());
        return r;
    }, py::arg("values"), py::arg("h1") = 1.0, py::arg("h2") = 1.0);
    m.def("symm_decr_1d", [](const std::vector<double>& v, double h) {
        return symm_decr_1d(Line1{static_cast<int>(v.size()), h, v}).values;
    }, py::arg("values"), py::arg("h") = 1.0);
    m.def("trap_moment_check", [](const Grid3& g, const CArray& u) {
        const TrapMomentCheck c = trap_moment_check(to_field(g, u));
        return py::make_tuple(c.before, c.after, c.holds);
    });

    m.def("read_field", [](const std::filesystem::path& p) {
        const Field f = read_field(p);
        return py::make_tuple(f.grid(), to_array(f));
    });
    m.def("write_field", [](const std::filesystem::path& p, const Grid3& g, const CArray& u) {
        write_field(p, to_field(g, u));
    });

    m.def("verify", [](const Grid3& g, double p, double r, double chi, int gn_count, double stability_t, int jobs) {
        VerifyOptions o;
        o.solve.p = p;
        o.solve.r = r;
        o.solve.chi = chi;
        o.gn_count = gn_count;
        o.stability_t = stability_t;
        o.jobs = jobs;
        VerifyReport rep;
        {
            py::gil_scoped_release release;
            rep = verify_all(g, o);
        }
        py::list rows;
        for (const auto& row : rep.rows)
            rows.append(py::make_tuple(row.id, row.value, row.threshold, std::string(to_string(row.outcome))));
        return rows;
    }, py::arg("grid"), py::arg("p") = 3.0, py::arg("r") = 0.1, py::arg("chi") = 4.0, py::arg("gn_count") = 1000,
       py::arg("stability_t") = 2.0, py::arg("jobs") = 1);
}
