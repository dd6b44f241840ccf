#include "tphom/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "tphom/errors.hpp"
#include "tphom/log.hpp"
#include "tphom/reference_element.hpp"

namespace tphom {

namespace {

Mat3 sym(const Mat3& g) { return 0.5 * (g + g.transpose()); }

}  // namespace

CorrectorSample reconstruct_correctors(const CellCorrectors& cc, double epsilon, const Vec3& x, int phase,
                                       const Mat3& E, const Vec3& grad_p, const Vec3& grad_th) {
    double xi[3];
    int c = cc.locate(Vec3(x[0] / epsilon, x[1] / epsilon, x[2] / epsilon), xi);
    if (cc.cell->labels[c] != phase + 1) throw SamplingError("corrector sample falls in the other phase");
    CorrectorSample s;
    for (int v = 0; v < 6; ++v) {
        auto [k, h] = kVoigtPairs[v];
        double weight = (k == h ? 1.0 : 2.0) * E(k, h);
        if (weight != 0.0) s.strain += weight * sym(cc.w_gradient(v, c, xi));
    }
    for (int i = 0; i < 3; ++i) {
        if (grad_p[i] != 0.0) s.p += grad_p[i] * cc.pi_gradient(phase, i, c, xi);
        if (grad_th[i] != 0.0) s.th += grad_th[i] * cc.theta_gradient(phase, i, c, xi);
    }
    return s;
}

bool ErrorRow::triangle_ok(double slack) const {
    auto ok = [slack](double corr, double plain, double cn) { return corr <= plain + cn + slack * (1.0 + plain + cn); };
    if (!ok(u_corr, u_plain, u_corrector)) return false;
    for (int m = 0; m < 2; ++m)
        if (!ok(p_corr[m], p_plain[m], p_corrector[m]) || !ok(th_corr[m], th_plain[m], th_corrector[m])) return false;
    return true;
}

double ConvergenceReport::field_error(const ErrorRow& r, int field) {
    switch (field) {
        case 0: return r.u_corr;
        case 1: return r.p_corr[0];
        case 2: return r.p_corr[1];
        case 3: return r.th_corr[0];
        default: return r.th_corr[1];
    }
}

std::vector<std::array<double, 5>> ConvergenceReport::ratios() const {
    std::vector<std::array<double, 5>> out;
    for (size_t i = 0; i + 1 < rows.size(); ++i) {
        std::array<double, 5> r{};
        for (int f = 0; f < 5; ++f) {
            double b = field_error(rows[i + 1], f);
            r[f] = b > 0 ? field_error(rows[i], f) / b : 0.0;
        }
        out.push_back(r);
    }
    return out;
}

bool ConvergenceReport::monotone(int field) const {
    for (size_t i = 0; i + 1 < rows.size(); ++i)
        if (!(field_error(rows[i + 1], field) < field_error(rows[i], field))) return false;
    return true;
}

ErrorRow compare_states(const MicroMesh& mesh, const MicroState& dns, const BoxGrid& grid, const MacroState& macro,
                        const CellCorrectors& cc, const EffectiveCoefficients& coeffs, const PhaseParameters& params) {
    const auto& R = q1::reference();
    const double h = mesh.h, w = h * h * h / 8.0;
    ErrorRow row;
    row.epsilon = mesh.epsilon;
    row.dns_cells = mesh.N;
    row.time = dns.t;
    const int nc = cc.cell->n;
    if (std::max(nc, mesh.n_cell) > 2 * std::min(nc, mesh.n_cell))
        log::warn("corrector resolution " + std::to_string(nc) + " and DNS cell resolution " +
                  std::to_string(mesh.n_cell) + " differ by more than a factor 2");
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const int m = mesh.labels[c] - 1;
        const Phase& ph = params.phase[m];
        auto nodes = mesh.cell_nodes(c);
        auto ijk = mesh.cell_ijk(c);
        for (int q = 0; q < 8; ++q) {
            Vec3 x(h * (ijk[0] + R.qp[q][0]), h * (ijk[1] + R.qp[q][1]), h * (ijk[2] + R.qp[q][2]));
            Vec3 u = Vec3::Zero();
            Mat3 G = Mat3::Zero();
            double p = 0, th = 0;
            Vec3 gp = Vec3::Zero(), gt = Vec3::Zero();
            for (int a = 0; a < 8; ++a) {
                const int v = nodes[a];
                const double N = R.qshape[q][a];
                const int d = mesh.side_dof[m][v];
                for (int r = 0; r < 3; ++r) {
                    u[r] += N * dns.u[3 * v + r];
                    for (int s = 0; s < 3; ++s) G(r, s) += dns.u[3 * v + r] * R.qgrad[q][a][s] / h;
                }
                p += N * dns.p[d];
                th += N * dns.th[d];
                for (int s = 0; s < 3; ++s) {
                    gp[s] += dns.p[d] * R.qgrad[q][a][s] / h;
                    gt[s] += dns.th[d] * R.qgrad[q][a][s] / h;
                }
            }
            const Mat3 e = sym(G);
            const Vec3 U = interpolate_vector(grid, macro.u, x);
            const Mat3 E = sym(interpolate_vector_gradient(grid, macro.u, x));
            const double P = interpolate_scalar(grid, macro.p[m], x);
            const double T = interpolate_scalar(grid, macro.th[m], x);
            const Vec3 GP = interpolate_scalar_gradient(grid, macro.p[m], x);
            const Vec3 GT = interpolate_scalar_gradient(grid, macro.th[m], x);
            const CorrectorSample cs = reconstruct_correctors(cc, mesh.epsilon, x, m, E, GP, GT);

            row.u_l2 += w * (u - U).squaredNorm();
            row.u_corr += w * (e - E - cs.strain).squaredNorm();
            row.u_plain += w * (e - E).squaredNorm();
            row.u_corrector += w * cs.strain.squaredNorm();
            row.p_l2[m] += w * (p - P) * (p - P);
            row.th_l2[m] += w * (th - T) * (th - T);
            row.p_corr[m] += w * (gp - GP - cs.p).squaredNorm();
            row.th_corr[m] += w * (gt - GT - cs.th).squaredNorm();
            row.p_plain[m] += w * (gp - GP).squaredNorm();
            row.th_plain[m] += w * (gt - GT).squaredNorm();
            row.p_corrector[m] += w * cs.p.squaredNorm();
            row.th_corrector[m] += w * cs.th.squaredNorm();

            const Mat3 sigma = 2.0 * ph.mu * e + ph.lambda * e.trace() * Mat3::Identity();
            row.energy_dns += w * ((sigma.array() * e.array()).sum() + (ph.beta * gp + ph.gamma * gt).dot(u));
            double em = (coeffs.hom_stress(E).array() * E.array()).sum();
            for (int k = 0; k < 2; ++k) {
                Vec3 gpk = interpolate_scalar_gradient(grid, macro.p[k], x);
                Vec3 gtk = interpolate_scalar_gradient(grid, macro.th[k], x);
                em += (coeffs.B[k].transpose() * gpk + coeffs.D[k].transpose() * gtk).dot(U);
            }
            row.energy_macro += w * em;
        }
    }
    auto root = [](double& v) { v = std::sqrt(v); };
    root(row.u_l2);
    root(row.u_corr);
    root(row.u_plain);
    root(row.u_corrector);
    for (int m = 0; m < 2; ++m) {
        root(row.p_l2[m]);
        root(row.th_l2[m]);
        root(row.p_corr[m]);
        root(row.th_corr[m]);
        root(row.p_plain[m]);
        root(row.th_plain[m]);
        root(row.p_corrector[m]);
        root(row.th_corrector[m]);
    }
    return row;
}

double trace_ratio(const MicroMesh& mesh, const Vec& q, int side) {
    const double h = mesh.h;
    const Mat8 Me = local_mass(h);
    const Mat8 Ke = local_scalar_stiffness(h, Mat3::Identity());
    double l2 = 0.0, grad = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        if (mesh.labels[c] != side + 1) continue;
        auto nodes = mesh.cell_nodes(c);
        Eigen::Matrix<double, 8, 1> ql;
        for (int a = 0; a < 8; ++a) ql[a] = q[mesh.side_dof[side][nodes[a]]];
        l2 += ql.dot(Me * ql);
        grad += ql.dot(Ke * ql);
    }
    double surf = 0.0;
    auto one = [](const Vec3&) { return 1.0; };
    for (const auto& f : mesh.interface_faces) {
        auto pos = face_node_positions(f);
        Eigen::Vector4d ql;
        for (int b = 0; b < 4; ++b) ql[b] = q[mesh.side_dof[side][mesh.node(pos[b][0], pos[b][1], pos[b][2])]];
        surf += ql.dot(local_face_mass(h, f, one) * ql);
    }
    const double eps = mesh.epsilon;
    const double denom = eps * eps * grad + l2;
    return denom > 0 ? eps * surf / denom : 0.0;
}

double trace_constant(const MicroMesh& mesh, const std::vector<Vec>& fields) {
    double c = 0.0;
    for (const Vec& q : fields)
        for (int side = 0; side < 2; ++side) c = std::max(c, trace_ratio(mesh, q, side));
    return c;
}

Vec sample_scalar(const MicroMesh& mesh, const std::function<double(const Vec3&)>& f) {
    Vec q = Vec::Zero(mesh.n_scalar);
    for (int v = 0; v < mesh.num_nodes(); ++v) {
        auto ijk = mesh.node_ijk(v);
        double val = f(Vec3(ijk[0] * mesh.h, ijk[1] * mesh.h, ijk[2] * mesh.h));
        for (int m = 0; m < 2; ++m)
            if (mesh.side_dof[m][v] >= 0) q[mesh.side_dof[m][v]] = val;
    }
    return q;
}

ConvergenceReport convergence_study(const StudyConfig& cfg) {
    CellCorrectors cc = solve_cell_problems(cfg.cell, cfg.params, cfg.cell_options);
    EffectiveCoefficients coeffs = compute_effective_coefficients(cc, cfg.params, cfg.sources);
    return convergence_study(cfg, cc, coeffs);
}

ConvergenceReport convergence_study(const StudyConfig& cfg, const CellCorrectors& cc, const EffectiveCoefficients& coeffs) {
    if (cfg.eps_list.empty()) throw ConfigError("eps_list is empty");
    if (std::abs(cfg.macro.dt - cfg.dns.dt) > 1e-14 || std::abs(cfg.macro.t_end - cfg.dns.t_end) > 1e-14)
        throw ConfigError("macro and DNS runs must share dt and the final time");
    std::vector<double> eps = cfg.eps_list;
    for (double e : eps) reciprocal_integer(e);
    std::sort(eps.begin(), eps.end(), std::greater<double>());

    ConvergenceReport report;
    MacroOptions mo = cfg.macro;
    const int nsteps = static_cast<int>(std::llround(mo.t_end / mo.dt));
    mo.output_every = std::max(1, nsteps);
    MacroSolver macro(coeffs, mo);
    auto mres = macro.run(macro_loads(cfg.sources, coeffs.volume));
    const MacroState& mfinal = mres.states.back();
    const MicroLoads mloads = micro_loads(cfg.sources);

    for (double e : eps) {
        auto t0 = std::chrono::steady_clock::now();
        auto mesh = std::make_shared<const MicroMesh>(tile_micro_domain(*cfg.cell, e));
        DnsOptions dopt = cfg.dns;
        dopt.output_every = std::max(1, nsteps);
        MicroSolver dns(mesh, cfg.params, dopt);
        auto dres = dns.run(mloads);
        const MicroState& dfinal = dres.states.back();
        ErrorRow row = compare_states(*mesh, dfinal, macro.grid(), mfinal, cc, coeffs, cfg.params);
        row.dns_unknowns = dns.num_unknowns();
        row.norms = dres.norms.back();
        std::vector<Vec> fields = {dfinal.p, dfinal.th,
                                   sample_scalar(*mesh, [](const Vec3& x) {
                                       return 1.0 + std::sin(M_PI * x[0]) * std::cos(M_PI * x[1]) * x[2];
                                   })};
        fields.erase(std::remove_if(fields.begin(), fields.end(), [](const Vec& v) { return v.isZero(0.0); }),
                     fields.end());
        row.trace_constant = trace_constant(*mesh, fields);
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        log::info("eps=" + std::to_string(e) + ": corrector error u " + std::to_string(row.u_corr) + ", p1 " +
                  std::to_string(row.p_corr[0]) + ", th1 " + std::to_string(row.th_corr[0]));
        if (!row.triangle_ok()) report.warnings.push_back("triangle-inequality gate failed at eps=" + std::to_string(e));
        report.rows.push_back(std::move(row));
    }
    const char* names[5] = {"u", "p1", "p2", "th1", "th2"};
    for (int f : {0, 1, 3})
        if (!report.monotone(f)) {
            report.warnings.push_back(std::string("corrector error of ") + names[f] + " is not monotone in eps");
            log::warn(report.warnings.back());
        }
    return report;
}

IdentityResidual energy_identity_residual(const EnergyLedger& ledger) {
    return {ledger.pressure_residual(), ledger.thermal_residual()};
}

}  // namespace tphom
