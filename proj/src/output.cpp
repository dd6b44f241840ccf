#include "tphom/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tphom/errors.hpp"

namespace tphom {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10e", v == 0.0 ? 0.0 : v);
    return buf;
}

template <class M>
ordered matrix_json(const M& m) {
    ordered rows = ordered::array();
    for (int i = 0; i < m.rows(); ++i) {
        ordered r = ordered::array();
        for (int j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
        rows.push_back(r);
    }
    return rows;
}

template <class M>
M matrix_from(const json& j, const std::string& key) {
    M m;
    if (!j.contains(key)) throw ConfigError("coefficients file lacks '" + key + "'");
    const json& a = j[key];
    if (!a.is_array() || static_cast<int>(a.size()) != m.rows()) throw ConfigError("coefficients '" + key + "' has wrong shape");
    for (int i = 0; i < m.rows(); ++i) {
        if (!a[i].is_array() || static_cast<int>(a[i].size()) != m.cols())
            throw ConfigError("coefficients '" + key + "' has wrong shape");
        for (int k = 0; k < m.cols(); ++k) m(i, k) = a[i][k].get<double>();
    }
    return m;
}

double scalar_from(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number()) throw ConfigError("coefficients file lacks '" + key + "'");
    return j[key].get<double>();
}

std::ofstream open_out(const std::string& path) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    return out;
}

void vtk_header(std::ostream& o, int n, double h, const std::string& title) {
    o << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET STRUCTURED_POINTS\n";
    o << "DIMENSIONS " << n << ' ' << n << ' ' << n << "\nORIGIN 0 0 0\nSPACING " << num(h) << ' ' << num(h) << ' '
      << num(h) << '\n';
}

void vtk_scalars(std::ostream& o, const std::string& name, const std::vector<double>& v) {
    o << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double x : v) o << num(x) << '\n';
}

void vtk_vectors(std::ostream& o, const std::string& name, const Vec& u) {
    o << "VECTORS " << name << " double\n";
    for (Eigen::Index v = 0; v < u.size() / 3; ++v) o << num(u[3 * v]) << ' ' << num(u[3 * v + 1]) << ' ' << num(u[3 * v + 2]) << '\n';
}

}  // namespace

std::string coefficients_to_json(const EffectiveCoefficients& c) {
    ordered j;
    j["resolution"] = c.resolution;
    j["interface_reading"] = c.interface_reading;
    j["A_hom"] = matrix_json(c.A_hom);
    j["A_energy"] = matrix_json(c.A_energy);
    for (int m = 0; m < 2; ++m) {
        std::string s = std::to_string(m + 1);
        j["B" + s] = matrix_json(c.B[m]);
        j["D" + s] = matrix_json(c.D[m]);
        j["C" + s] = matrix_json(c.C[m]);
        j["K" + s] = matrix_json(c.K[m]);
        j["L" + s] = matrix_json(c.L[m]);
    }
    for (int m = 0; m < 2; ++m) {
        std::string s = std::to_string(m + 1);
        j["phi" + s + "_star"] = c.phi_star[m];
        j["alpha" + s + "_star"] = c.alpha_star[m];
        j["c" + s + "_star"] = c.c_star[m];
        j["gamma" + s + "_star"] = c.gamma_star[m];
        j["g" + s + "_star"] = c.g_star[m];
        j["h" + s + "_star"] = c.h_star[m];
        j["beta" + s] = c.beta[m];
        j["gamma" + s] = c.gamma[m];
        j["volume" + s] = c.volume[m];
    }
    j["f_star"] = {c.f_star[0], c.f_star[1], c.f_star[2]};
    j["zeta_star"] = c.zeta_star;
    j["omega_star"] = c.omega_star;
    j["interface_area"] = c.interface_area;
    j["energy_form_mismatch"] = c.energy_form_mismatch;
    return j.dump(2) + "\n";
}

EffectiveCoefficients coefficients_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed coefficients JSON: ") + e.what());
    }
    EffectiveCoefficients c;
    try {
        c.resolution = j.value("resolution", 0);
        c.interface_reading = j.value("interface_reading", c.interface_reading);
        c.A_hom = matrix_from<Mat6>(j, "A_hom");
        c.A_energy = j.contains("A_energy") ? matrix_from<Mat6>(j, "A_energy") : c.A_hom;
        for (int m = 0; m < 2; ++m) {
            std::string s = std::to_string(m + 1);
            c.B[m] = matrix_from<Mat3>(j, "B" + s);
            c.D[m] = matrix_from<Mat3>(j, "D" + s);
            c.C[m] = matrix_from<Mat3>(j, "C" + s);
            c.K[m] = matrix_from<Mat3>(j, "K" + s);
            c.L[m] = matrix_from<Mat3>(j, "L" + s);
            c.phi_star[m] = scalar_from(j, "phi" + s + "_star");
            c.alpha_star[m] = scalar_from(j, "alpha" + s + "_star");
            c.c_star[m] = scalar_from(j, "c" + s + "_star");
            c.gamma_star[m] = scalar_from(j, "gamma" + s + "_star");
            c.g_star[m] = scalar_from(j, "g" + s + "_star");
            c.h_star[m] = scalar_from(j, "h" + s + "_star");
            c.beta[m] = scalar_from(j, "beta" + s);
            c.gamma[m] = scalar_from(j, "gamma" + s);
            c.volume[m] = scalar_from(j, "volume" + s);
        }
        if (!j.contains("f_star") || !j["f_star"].is_array() || j["f_star"].size() != 3)
            throw ConfigError("coefficients file lacks 'f_star'");
        for (int d = 0; d < 3; ++d) c.f_star[d] = j["f_star"][d].get<double>();
        c.zeta_star = scalar_from(j, "zeta_star");
        c.omega_star = scalar_from(j, "omega_star");
        c.interface_area = j.value("interface_area", 0.0);
        c.energy_form_mismatch = j.value("energy_form_mismatch", 0.0);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid coefficients file: ") + e.what());
    }
    return c;
}

void write_coefficients_json(const std::string& path, const EffectiveCoefficients& c) {
    open_out(path) << coefficients_to_json(c);
}

EffectiveCoefficients read_coefficients_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open coefficients file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return coefficients_from_json(ss.str());
}

void write_coefficients_csv(const std::string& path, const EffectiveCoefficients& c) {
    auto out = open_out(path);
    out << "name,i,j,value\n";
    auto mat = [&](const std::string& name, const auto& m) {
        for (int i = 0; i < m.rows(); ++i)
            for (int k = 0; k < m.cols(); ++k) out << name << ',' << i + 1 << ',' << k + 1 << ',' << num(m(i, k)) << '\n';
    };
    auto sc = [&](const std::string& name, double v) { out << name << ",0,0," << num(v) << '\n'; };
    mat("A_hom", c.A_hom);
    for (int m = 0; m < 2; ++m) {
        std::string s = std::to_string(m + 1);
        mat("B" + s, c.B[m]);
        mat("D" + s, c.D[m]);
        mat("C" + s, c.C[m]);
        mat("K" + s, c.K[m]);
        mat("L" + s, c.L[m]);
    }
    for (int m = 0; m < 2; ++m) {
        std::string s = std::to_string(m + 1);
        sc("phi" + s + "_star", c.phi_star[m]);
        sc("alpha" + s + "_star", c.alpha_star[m]);
        sc("c" + s + "_star", c.c_star[m]);
        sc("gamma" + s + "_star", c.gamma_star[m]);
        sc("g" + s + "_star", c.g_star[m]);
        sc("h" + s + "_star", c.h_star[m]);
    }
    for (int d = 0; d < 3; ++d) out << "f_star," << d + 1 << ",0," << num(c.f_star[d]) << '\n';
    sc("zeta_star", c.zeta_star);
    sc("omega_star", c.omega_star);
}

void write_vtk(const std::string& path, const BoxGrid& grid, const MacroState& s) {
    auto out = open_out(path);
    vtk_header(out, grid.M + 1, grid.h, "macro t=" + num(s.t));
    out << "POINT_DATA " << grid.num_nodes() << '\n';
    vtk_vectors(out, "u", s.u);
    const char* names[4] = {"p1", "p2", "th1", "th2"};
    const Vec* f[4] = {&s.p[0], &s.p[1], &s.th[0], &s.th[1]};
    for (int k = 0; k < 4; ++k) vtk_scalars(out, names[k], std::vector<double>(f[k]->data(), f[k]->data() + f[k]->size()));
}

void write_vtk(const std::string& path, const MicroMesh& mesh, const MicroState& s) {
    auto out = open_out(path);
    vtk_header(out, mesh.N + 1, mesh.h, "dns eps=" + num(mesh.epsilon) + " t=" + num(s.t));
    const int nn = mesh.num_nodes();
    out << "POINT_DATA " << nn << '\n';
    vtk_vectors(out, "u", s.u);
    for (int m = 0; m < 2; ++m) {
        std::vector<double> p(nn, 0.0), th(nn, 0.0);
        for (int v = 0; v < nn; ++v) {
            int d = mesh.side_dof[m][v];
            if (d < 0) continue;
            p[v] = s.p[d];
            th[v] = s.th[d];
        }
        vtk_scalars(out, "p" + std::to_string(m + 1), p);
        vtk_scalars(out, "th" + std::to_string(m + 1), th);
    }
    out << "CELL_DATA " << mesh.num_cells() << "\nSCALARS phase int 1\nLOOKUP_TABLE default\n";
    for (auto l : mesh.labels) out << int(l) << '\n';
}

void write_energy_csv(const std::string& path, const EnergyLedger& ledger) {
    auto out = open_out(path);
    out << "t,elastic,storage,diffusion,exchange,p_storage,p_numerical,p_coupling,p_diffusion,p_exchange,p_source,"
           "th_storage,th_numerical,th_coupling,th_diffusion,th_exchange,th_source\n";
    for (const auto& r : ledger.rows) {
        double v[] = {r.t,          r.elastic,     r.storage,     r.diffusion,   r.exchange,  r.p_storage,
                      r.p_numerical, r.p_coupling, r.p_diffusion, r.p_exchange,  r.p_source,  r.th_storage,
                      r.th_numerical, r.th_coupling, r.th_diffusion, r.th_exchange, r.th_source};
        for (size_t k = 0; k < std::size(v); ++k) out << (k ? "," : "") << num(v[k]);
        out << '\n';
    }
}

void write_norms_json(const std::string& path, const std::vector<MicroNorms>& norms, const std::vector<SolveStats>& stats,
                      const std::vector<double>& energy, double interface_residual) {
    ordered j;
    ordered rows = ordered::array();
    for (size_t k = 0; k < norms.size(); ++k) {
        const auto& n = norms[k];
        ordered r;
        r["t"] = n.t;
        r["u_h1"] = n.u_h1;
        r["p_v"] = n.p_v;
        r["th_v"] = n.th_v;
        r["p_jump"] = n.p_jump;
        r["th_jump"] = n.th_jump;
        if (k < energy.size()) r["energy"] = energy[k];
        if (k > 0 && k - 1 < stats.size()) {
            r["iterations"] = stats[k - 1].iterations;
            r["residual"] = stats[k - 1].residual;
        }
        rows.push_back(r);
    }
    j["steps"] = rows;
    j["interface_flux_residual"] = interface_residual;
    open_out(path) << j.dump(2) << '\n';
}

void write_report_csv(const std::string& path, const ConvergenceReport& r) {
    auto out = open_out(path);
    out << "epsilon,dns_cells,u_l2,p1_l2,p2_l2,th1_l2,th2_l2,u_corr,p1_corr,p2_corr,th1_corr,th2_corr,"
           "u_plain,p1_plain,th1_plain,trace_constant,energy_dns,energy_macro\n";
    for (const auto& row : r.rows) {
        double v[] = {row.epsilon,    row.u_l2,       row.p_l2[0],     row.p_l2[1],    row.th_l2[0],    row.th_l2[1],
                      row.u_corr,     row.p_corr[0],  row.p_corr[1],   row.th_corr[0], row.th_corr[1],  row.u_plain,
                      row.p_plain[0], row.th_plain[0], row.trace_constant, row.energy_dns, row.energy_macro};
        out << num(v[0]) << ',' << row.dns_cells;
        for (size_t k = 1; k < std::size(v); ++k) out << ',' << num(v[k]);
        out << '\n';
    }
}

void write_report_json(const std::string& path, const ConvergenceReport& r) {
    ordered j;
    ordered rows = ordered::array();
    for (const auto& row : r.rows) {
        ordered o;
        o["epsilon"] = row.epsilon;
        o["dns_cells"] = row.dns_cells;
        o["dns_unknowns"] = row.dns_unknowns;
        o["time"] = row.time;
        o["l2"] = {{"u", row.u_l2}, {"p1", row.p_l2[0]}, {"p2", row.p_l2[1]}, {"th1", row.th_l2[0]}, {"th2", row.th_l2[1]}};
        o["corrector"] = {{"u", row.u_corr},      {"p1", row.p_corr[0]},   {"p2", row.p_corr[1]},
                          {"th1", row.th_corr[0]}, {"th2", row.th_corr[1]}};
        o["plain"] = {{"u", row.u_plain},      {"p1", row.p_plain[0]},   {"p2", row.p_plain[1]},
                      {"th1", row.th_plain[0]}, {"th2", row.th_plain[1]}};
        o["norms"] = {{"u_h1", row.norms.u_h1}, {"p_v", row.norms.p_v}, {"th_v", row.norms.th_v}};
        o["trace_constant"] = row.trace_constant;
        o["energy"] = {{"dns", row.energy_dns}, {"macro", row.energy_macro}};
        rows.push_back(o);
    }
    j["rows"] = rows;
    ordered ratios = ordered::array();
    for (const auto& q : r.ratios()) ratios.push_back({{"u", q[0]}, {"p1", q[1]}, {"p2", q[2]}, {"th1", q[3]}, {"th2", q[4]}});
    j["ratios"] = ratios;
    j["monotone"] = {{"u", r.monotone(0)}, {"p1", r.monotone(1)}, {"th1", r.monotone(3)}};
    j["warnings"] = r.warnings;
    open_out(path) << j.dump(2) << '\n';
}

std::string series_name(const std::string& dir, const std::string& prefix, int k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "_%05d.vtk", k);
    return (std::filesystem::path(dir) / (prefix + buf)).string();
}

void ensure_directory(const std::string& dir) { std::filesystem::create_directories(dir); }

}  // namespace tphom
