#include "tphom/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "tphom/effective.hpp"
#include "tphom/errors.hpp"
#include "tphom/log.hpp"
#include "tphom/output.hpp"
#include "tphom/verification.hpp"

namespace tphom {

namespace {

std::string out_dir(const RunConfig& cfg, const PipelineOptions& o) {
    std::string d = o.out_dir.empty() ? cfg.output_dir : o.out_dir;
    ensure_directory(d);
    return d;
}

std::string path_in(const std::string& dir, const std::string& name) { return (std::filesystem::path(dir) / name).string(); }

CellProblemOptions cell_options(const RunConfig& cfg, const PipelineOptions& o) {
    CellProblemOptions c = cfg.cell;
    c.threads = o.sequential ? 1 : std::max(1, o.threads);
    return c;
}

std::shared_ptr<const UnitCellMesh> cell_mesh(const RunConfig& cfg) {
    return std::make_shared<const UnitCellMesh>(build_unit_cell(cfg.resolution, cfg.inclusion, cfg.geometry));
}

}  // namespace

int cmd_upscale(const RunConfig& cfg, const PipelineOptions& opts) {
    const std::string dir = out_dir(cfg, opts);
    auto cell = cell_mesh(cfg);
    CellCorrectors cc = solve_cell_problems(cell, cfg.params, cell_options(cfg, opts));
    EffectiveCoefficients c = compute_effective_coefficients(cc, cfg.params, cfg.sources);
    write_coefficients_json(path_in(dir, "coefficients.json"), c);
    write_coefficients_csv(path_in(dir, "coefficients.csv"), c);
    log::info("wrote coefficients to " + dir);
    return 0;
}

int cmd_macro(const RunConfig& cfg, const PipelineOptions& opts) {
    if (opts.coeffs_path.empty()) throw ConfigError("macro needs --coeffs <coefficients.json>");
    EffectiveCoefficients c = read_coefficients_json(opts.coeffs_path);
    const std::string dir = out_dir(cfg, opts);
    MacroSolver solver(c, cfg.macro);
    int k = 0;
    auto res = solver.run(macro_loads(cfg.sources, c.volume), [&](const MacroState& s) {
        if (cfg.write_vtk) write_vtk(series_name(dir, "macro", k), solver.grid(), s);
        ++k;
    });
    write_energy_csv(path_in(dir, "energy.csv"), res.ledger);
    nlohmann::ordered_json j;
    j["unknowns"] = solver.num_unknowns();
    j["steps"] = res.stats.size();
    j["pressure_identity_residual"] = res.ledger.pressure_residual();
    j["thermal_identity_residual"] = res.ledger.thermal_residual();
    int iters = 0;
    double worst = 0.0;
    for (const auto& s : res.stats) {
        iters = std::max(iters, s.iterations);
        worst = std::max(worst, s.residual);
    }
    j["max_iterations"] = iters;
    j["max_residual"] = worst;
    std::ofstream(path_in(dir, "macro_summary.json")) << j.dump(2) << '\n';
    log::info("macro run: " + std::to_string(res.stats.size()) + " steps, output in " + dir);
    return 0;
}

int cmd_dns(const RunConfig& cfg, const PipelineOptions& opts) {
    const std::string dir = out_dir(cfg, opts);
    auto cell = cell_mesh(cfg);
    auto mesh = std::make_shared<const MicroMesh>(tile_micro_domain(*cell, cfg.dns_epsilon, cfg.dns_merged));
    DnsOptions dopt = cfg.dns;
    dopt.override_desk_cap = dopt.override_desk_cap || opts.override_desk_cap;
    MicroSolver solver(mesh, cfg.params, dopt);
    const MicroLoads loads = micro_loads(cfg.sources);
    const int nsteps = static_cast<int>(std::llround(dopt.t_end / dopt.dt));
    MicroState cur = solver.zero_state();
    std::vector<MicroNorms> norms{solver.norms(cur)};
    std::vector<double> energy{solver.natural_energy(cur)};
    std::vector<SolveStats> stats;
    double flux_residual = 0.0;
    int k = 0;
    if (cfg.write_vtk) write_vtk(series_name(dir, "dns", k++), *mesh, cur);
    for (int n = 1; n <= nsteps; ++n) {
        MicroState next = solver.step(cur, loads);
        stats.push_back(solver.last_stats());
        if (!mesh->merged) flux_residual = std::max(flux_residual, solver.interface_flux_residual(cur, next, loads));
        cur = std::move(next);
        norms.push_back(solver.norms(cur));
        energy.push_back(solver.natural_energy(cur));
        if (cfg.write_vtk && (n % dopt.output_every == 0 || n == nsteps)) write_vtk(series_name(dir, "dns", k++), *mesh, cur);
    }
    write_norms_json(path_in(dir, "dns_norms.json"), norms, stats, energy, flux_residual);
    log::info("dns run: " + std::to_string(solver.num_unknowns()) + " unknowns, " + std::to_string(nsteps) + " steps");
    return 0;
}

int cmd_verify(const RunConfig& cfg, const PipelineOptions& opts) {
    if (cfg.eps_list.empty()) throw ConfigError("verify.eps_list is empty");
    const std::string dir = out_dir(cfg, opts);
    StudyConfig sc;
    sc.cell = cell_mesh(cfg);
    sc.params = cfg.params;
    sc.sources = cfg.sources;
    sc.eps_list = cfg.eps_list;
    sc.macro = cfg.macro;
    sc.dns = cfg.dns;
    sc.dns.override_desk_cap = sc.dns.override_desk_cap || opts.override_desk_cap;
    sc.cell_options = cell_options(cfg, opts);
    ConvergenceReport r = convergence_study(sc);
    write_report_csv(path_in(dir, "verify.csv"), r);
    write_report_json(path_in(dir, "verify.json"), r);
    log::info("verification report written to " + dir);
    return 0;
}

int cmd_selftest(std::ostream& out, int threads) {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok, double value) {
        out << (ok ? "PASS " : "FAIL ") << name << " (" << value << ")\n";
        if (!ok) ++failures;
    };
    CellProblemOptions co;
    co.threads = threads;

    PhaseParameters same;
    same.phase[0] = same.phase[1] = Phase{2.0, 1.0, 0.5, 0.3, 0.1, 1.0, 1.5, 0.8, 1.2};
    auto cube = std::make_shared<const UnitCellMesh>(build_unit_cell(4, InclusionSpec::box({0.25, 0.25, 0.25}, {0.75, 0.75, 0.75})));
    {
        CellCorrectors cc = solve_cell_problems(cube, same, co);
        EffectiveCoefficients c = compute_effective_coefficients(cc, same);
        Mat6 ref = same.phase[0].stiffness().to_voigt();
        check("homogeneous medium reproduces the phase stiffness", (c.A_hom - ref).cwiseAbs().maxCoeff() <= 1e-8 * ref.cwiseAbs().maxCoeff(),
              (c.A_hom - ref).cwiseAbs().maxCoeff());
        double w = 0.0;
        for (const auto& v : cc.w) w = std::max(w, v.cwiseAbs().maxCoeff());
        check("homogeneous medium has vanishing elastic correctors", w <= 1e-8, w);
    }
    PhaseParameters contrast = same;
    contrast.phase[1] = Phase{4.0, 2.0, 0.8, 0.2, 0.05, 0.5, 0.3, 0.4, 1.0};
    {
        CellCorrectors cc = solve_cell_problems(cube, contrast, co);
        EffectiveCoefficients c = compute_effective_coefficients(cc, contrast);
        double k2 = std::max({c.K[1].cwiseAbs().maxCoeff(), c.L[1].cwiseAbs().maxCoeff(), c.B[1].cwiseAbs().maxCoeff(),
                              c.D[1].cwiseAbs().maxCoeff()});
        check("interior inclusion: inclusion transport and coupling tensors vanish", k2 <= 1e-8, k2);
        double cross = (contrast.phase[0].beta * c.K[0] - contrast.phase[0].kappa * c.B[0].transpose()).cwiseAbs().maxCoeff();
        check("Biot matrix and permeability are proportional", cross <= 1e-8 * c.K[0].cwiseAbs().maxCoeff(), cross);
        double part = (c.C[0] + c.C[1] - Mat3::Identity()).cwiseAbs().maxCoeff();
        check("coupling matrices partition the identity", part <= 1e-8, part);
        check("flux and energy forms of the stiffness agree", c.energy_form_mismatch <= 1e-8, c.energy_form_mismatch);
    }
    {
        GeometryOptions g;
        g.allow_boundary_inclusion = true;
        auto lam = std::make_shared<const UnitCellMesh>(build_unit_cell(4, InclusionSpec::laminate(0, 0.25, 0.75), g));
        CellCorrectors cc = solve_cell_problems(lam, contrast, co);
        EffectiveCoefficients c = compute_effective_coefficients(cc, contrast);
        double k11 = std::abs(c.K[0](0, 0));
        double k22 = std::abs(c.K[0](1, 1) - contrast.phase[0].kappa * c.volume[0]);
        check("laminate: cross-layer permeability of the split phase is zero", k11 <= 1e-6, k11);
        check("laminate: in-layer permeability equals the volume fraction", k22 <= 1e-6, k22);
    }
    {
        PhaseParameters p = contrast;
        p.zeta = Profile::constant(2.0);
        double e[2];
        for (int k = 0; k < 2; ++k) {
            MicroMesh m = tile_micro_domain(*cube, k == 0 ? 0.5 : 0.25);
            SpMat J = assemble_interface_coupling(m, p.zeta);
            Vec q = Vec::Zero(m.n_scalar);
            for (int v = 0; v < m.num_nodes(); ++v)
                if (m.side_dof[0][v] >= 0) q[m.side_dof[0][v]] = 1.0;
            e[k] = q.dot(J * q);
        }
        check("unit-jump interface energy is independent of the scale", std::abs(e[0] - e[1]) <= 1e-12 * e[0], std::abs(e[0] - e[1]));
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace tphom
