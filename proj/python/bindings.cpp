#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "tphom/config.hpp"
#include "tphom/effective.hpp"
#include "tphom/errors.hpp"
#include "tphom/macro.hpp"
#include "tphom/output.hpp"
#include "tphom/pipeline.hpp"

namespace py = pybind11;
using namespace tphom;

namespace {

EffectiveCoefficients upscale(const RunConfig& cfg) {
    auto cell = std::make_shared<const UnitCellMesh>(build_unit_cell(cfg.resolution, cfg.inclusion, cfg.geometry));
    CellCorrectors cc = solve_cell_problems(cell, cfg.params, cfg.cell);
    return compute_effective_coefficients(cc, cfg.params, cfg.sources);
}

py::dict macro_state(const MacroState& s) {
    py::dict d;
    d["t"] = s.t;
    d["u"] = s.u;
    d["p1"] = s.p[0];
    d["p2"] = s.p[1];
    d["th1"] = s.th[0];
    d["th2"] = s.th[1];
    return d;
}

}  // namespace

PYBIND11_MODULE(_tphom, m) {
    m.doc() = "Two-scale thermo-poroelastic homogenization";

    py::register_exception<Error>(m, "TphomError", PyExc_ValueError);

    py::class_<RunConfig>(m, "RunConfig")
        .def_readonly("resolution", &RunConfig::resolution)
        .def_readonly("dns_epsilon", &RunConfig::dns_epsilon)
        .def_readonly("eps_list", &RunConfig::eps_list)
        .def_readonly("output_dir", &RunConfig::output_dir)
        .def_property_readonly("dt", [](const RunConfig& c) { return c.macro.dt; })
        .def_property_readonly("t_end", [](const RunConfig& c) { return c.macro.t_end; })
        .def_property_readonly("macro_resolution", [](const RunConfig& c) { return c.macro.resolution; });

    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("load_config", &load_config, py::arg("path"));
    m.def("parse_epsilon", &parse_epsilon, py::arg("text"));

    m.def(
        "upscale",
        [](const RunConfig& cfg) {
            py::gil_scoped_release nogil;
            return coefficients_to_json(upscale(cfg));
        },
        py::arg("config"), "Solve the cell problems and return the effective coefficients as JSON text.");

    m.def(
        "macro_run",
        [](const RunConfig& cfg, const std::string& coefficients_json) {
            EffectiveCoefficients c = coefficients_from_json(coefficients_json);
            MacroSolver::Result r;
            BoxGrid grid(cfg.macro.resolution);
            {
                py::gil_scoped_release nogil;
                MacroSolver s(c, cfg.macro);
                r = s.run(macro_loads(cfg.sources, c.volume));
            }
            py::list states;
            for (const auto& st : r.states) states.append(macro_state(st));
            py::dict out;
            out["states"] = states;
            out["nodes_per_axis"] = grid.M + 1;
            out["pressure_residual"] = r.ledger.pressure_residual();
            out["thermal_residual"] = r.ledger.thermal_residual();
            return out;
        },
        py::arg("config"), py::arg("coefficients_json"),
        "Run the homogenized solver; returns the stored states and the energy-identity residuals.");

    m.def(
        "run",
        [](const std::string& command, const RunConfig& cfg, const std::string& out_dir, const std::string& coeffs) {
            PipelineOptions o;
            o.out_dir = out_dir;
            o.coeffs_path = coeffs;
            o.sequential = true;
            py::gil_scoped_release nogil;
            if (command == "upscale") return cmd_upscale(cfg, o);
            if (command == "macro") return cmd_macro(cfg, o);
            if (command == "dns") return cmd_dns(cfg, o);
            if (command == "verify") return cmd_verify(cfg, o);
            throw ConfigError("unknown command '" + command + "'");
        },
        py::arg("command"), py::arg("config"), py::arg("out_dir"), py::arg("coeffs") = "",
        "Run one pipeline stage, writing its files to out_dir.");

    m.def(
        "selftest",
        []() {
            std::ostringstream os;
            int code = cmd_selftest(os);
            return py::make_tuple(code, os.str());
        },
        "Analytic checks on small cells; returns (exit code, report).");
}
