#include "tphom/cell_problems.hpp"

#include <cmath>
#include <numeric>

#include "tphom/errors.hpp"
#include "tphom/fem.hpp"
#include "tphom/log.hpp"
#include "tphom/parallel.hpp"

namespace tphom {

PhaseSpace build_phase_space(const UnitCellMesh& cell, int phase) {
    PhaseSpace s;
    s.phase = phase;
    s.node_dof.assign(cell.num_nodes(), -1);
    std::vector<double> lumped;
    const double w = cell.h * cell.h * cell.h / 8.0;
    for (int c = 0; c < cell.num_cells(); ++c) {
        if (cell.labels[c] != phase) continue;
        for (int v : cell.cell_nodes(c)) {
            if (s.node_dof[v] < 0) {
                s.node_dof[v] = s.ndofs++;
                lumped.push_back(0.0);
            }
            lumped[s.node_dof[v]] += w;
        }
    }
    s.lumped = Eigen::Map<Vec>(lumped.data(), static_cast<Eigen::Index>(lumped.size()));
    // Connected components through shared element nodes.
    std::vector<int> parent(s.ndofs);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int c = 0; c < cell.num_cells(); ++c) {
        if (cell.labels[c] != phase) continue;
        auto nodes = cell.cell_nodes(c);
        int r0 = find(s.node_dof[nodes[0]]);
        for (int a = 1; a < 8; ++a) {
            int r = find(s.node_dof[nodes[a]]);
            if (r != r0) parent[r] = r0;
        }
    }
    s.component.assign(s.ndofs, -1);
    std::vector<int> id(s.ndofs, -1);
    for (int d = 0; d < s.ndofs; ++d) {
        int r = find(d);
        if (id[r] < 0) id[r] = s.num_components++;
        s.component[d] = id[r];
    }
    return s;
}

namespace {

DofTable phase_table(const UnitCellMesh& cell, const PhaseSpace& s) {
    DofTable t;
    t.width = 8;
    t.ndofs = s.ndofs;
    t.dofs.assign(static_cast<size_t>(cell.num_cells()) * 8, -1);
    for (int c = 0; c < cell.num_cells(); ++c) {
        if (cell.labels[c] != s.phase) continue;
        auto nodes = cell.cell_nodes(c);
        for (int a = 0; a < 8; ++a) t.dofs[static_cast<size_t>(c) * 8 + a] = s.node_dof[nodes[a]];
    }
    return t;
}

std::vector<Tensor4> cell_stiffness(const UnitCellMesh& cell, const PhaseParameters& params) {
    std::array<Tensor4, 2> C = {params.phase[0].stiffness(), params.phase[1].stiffness()};
    std::vector<Tensor4> out(cell.num_cells());
    for (int c = 0; c < cell.num_cells(); ++c) out[c] = C[cell.labels[c] - 1];
    return out;
}

}  // namespace

std::array<Vec, 6> solve_elastic_correctors(const UnitCellMesh& cell, const PhaseParameters& params,
                                            const CellProblemOptions& opts, std::vector<SolveStats>* stats) {
    for (const auto& p : params.phase)
        if (!(p.mu > 0) || p.lambda < 0) throw MaterialError("invalid Lame constants for the elastic cell problem");
    auto C = cell_stiffness(cell, params);
    SpMat K = assemble_elastic_stiffness(cell, C);
    const auto& R = q1::reference();
    const double h2 = cell.h * cell.h;
    const int nn = cell.num_nodes();

    NullSpace ker;
    for (int d = 0; d < 3; ++d) {
        Vec t = Vec::Zero(3 * nn);
        for (int v = 0; v < nn; ++v) t[3 * v + d] = 1.0;
        ker.vectors.push_back(t);
    }

    std::array<Vec, 6> w;
    std::array<SolveStats, 6> st;
    parallel_for(6, opts.threads, [&](int a) {
        const int k = kVoigtPairs[a][0], h = kVoigtPairs[a][1];
        Mat3 E = unit_strain(k, h);
        Vec F = Vec::Zero(3 * nn);
        Vec gross = Vec::Zero(3 * nn);
        for (int c = 0; c < cell.num_cells(); ++c) {
            Mat3 sigma = C[c].contract(E);
            auto nodes = cell.cell_nodes(c);
            for (int b = 0; b < 8; ++b)
                for (int i = 0; i < 3; ++i) {
                    double s = 0.0;
                    for (int j = 0; j < 3; ++j) s += sigma(i, j) * R.grad_int[b][j];
                    F[3 * nodes[b] + i] -= s * h2;
                    gross[3 * nodes[b] + i] += std::abs(s) * h2;
                }
        }
        NullSpace kk = ker;
        kk.rhs_scale = gross.norm();
        w[a] = solve_constrained(K, F, kk, opts.solver, &st[a]);
        st[a].method = "elastic w" + std::to_string(k + 1) + std::to_string(h + 1) + ": " + st[a].method;
    });
    if (stats) stats->insert(stats->end(), st.begin(), st.end());
    return w;
}

std::array<Vec, 3> solve_phase_correctors(const UnitCellMesh& cell, const PhaseSpace& space, double coef,
                                          const CellProblemOptions& opts, std::vector<SolveStats>* stats) {
    if (!(coef > 0)) throw MaterialError("cell-problem coefficient must be positive");
    if (space.ndofs == 0) throw DegenerateGeometryError("phase support is empty");
    if (space.num_components > 1)
        log::info("phase " + std::to_string(space.phase) + " support has " + std::to_string(space.num_components) +
                  " connected components; mean-zero enforced per component");
    DofTable t = phase_table(cell, space);
    const double h = cell.h;
    SpMat K = assemble(t, t, [&](int e, double* ke) {
        if (cell.labels[e] != space.phase) return false;
        Eigen::Map<Eigen::Matrix<double, 8, 8, Eigen::RowMajor>>{ke} = local_scalar_stiffness(h, coef * Mat3::Identity());
        return true;
    });
    NullSpace ker;
    for (int comp = 0; comp < space.num_components; ++comp) {
        Vec z = Vec::Zero(space.ndofs);
        for (int d = 0; d < space.ndofs; ++d)
            if (space.component[d] == comp) z[d] = 1.0;
        ker.vectors.push_back(z);
    }
    ker.weights = space.lumped;
    const auto& R = q1::reference();
    std::array<Vec, 3> out;
    std::array<SolveStats, 3> st;
    parallel_for(3, opts.threads, [&](int i) {
        Vec F = assemble_vector(t, [&](int e, double* fe) {
            if (cell.labels[e] != space.phase) return false;
            for (int a = 0; a < 8; ++a) fe[a] = -coef * R.grad_int[a][i] * h * h;
            return true;
        });
        NullSpace kk = ker;
        kk.rhs_scale = assemble_vector(t, [&](int e, double* fe) {
                           if (cell.labels[e] != space.phase) return false;
                           for (int a = 0; a < 8; ++a) fe[a] = std::abs(coef * R.grad_int[a][i] * h * h);
                           return true;
                       }).norm();
        out[i] = solve_constrained(K, F, kk, opts.solver, &st[i]);
        st[i].method = "phase " + std::to_string(space.phase) + " direction " + std::to_string(i + 1) + ": " + st[i].method;
    });
    if (stats) stats->insert(stats->end(), st.begin(), st.end());
    return out;
}

std::array<Vec, 3> solve_pressure_correctors(const UnitCellMesh& cell, const PhaseParameters& params, int phase,
                                             const CellProblemOptions& opts) {
    return solve_phase_correctors(cell, build_phase_space(cell, phase), params.phase[phase - 1].kappa, opts);
}

std::array<Vec, 3> solve_temperature_correctors(const UnitCellMesh& cell, const PhaseParameters& params, int phase,
                                                const CellProblemOptions& opts) {
    return solve_phase_correctors(cell, build_phase_space(cell, phase), params.phase[phase - 1].conductivity, opts);
}

CellCorrectors solve_cell_problems(std::shared_ptr<const UnitCellMesh> cellp, const PhaseParameters& params,
                                   const CellProblemOptions& opts) {
    const UnitCellMesh& cell = *cellp;
    CellCorrectors cc;
    cc.cell = cellp;
    cc.w = solve_elastic_correctors(cell, params, opts, &cc.stats);
    for (int m = 0; m < 2; ++m) {
        cc.space[m] = build_phase_space(cell, m + 1);
        if (cc.space[m].ndofs == 0) {
            for (int i = 0; i < 3; ++i) cc.pi[m][i] = cc.theta[m][i] = Vec();
            continue;
        }
        cc.pi[m] = solve_phase_correctors(cell, cc.space[m], params.phase[m].kappa, opts, &cc.stats);
        cc.theta[m] = solve_phase_correctors(cell, cc.space[m], params.phase[m].conductivity, opts, &cc.stats);
    }
    return cc;
}

int CellCorrectors::locate(const Vec3& y, double* xi) const {
    const int n = cell->n;
    int ijk[3];
    for (int d = 0; d < 3; ++d) {
        double s = fractional(y[d]) * n;
        int i = static_cast<int>(std::floor(s));
        if (i >= n) i = n - 1;
        if (i < 0) i = 0;
        ijk[d] = i;
        xi[d] = s - i;
    }
    return cell->cell(ijk[0], ijk[1], ijk[2]);
}

Mat3 CellCorrectors::w_gradient(int voigt, int c, const double* xi) const {
    auto nodes = cell->cell_nodes(c);
    Mat3 g = Mat3::Zero();
    const Vec& f = w[voigt];
    for (int a = 0; a < 8; ++a) {
        double dn[3];
        q1::shape_grad(a, xi, dn);
        for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s) g(r, s) += f[3 * nodes[a] + r] * dn[s];
    }
    return g / cell->h;
}

Vec3 CellCorrectors::scalar_gradient(const Vec& f, int m, int c, const double* xi) const {
    if (cell->labels[c] != m + 1) throw SamplingError("phase corrector sampled outside its phase");
    auto nodes = cell->cell_nodes(c);
    Vec3 g = Vec3::Zero();
    for (int a = 0; a < 8; ++a) {
        double dn[3];
        q1::shape_grad(a, xi, dn);
        double v = f[space[m].node_dof[nodes[a]]];
        for (int s = 0; s < 3; ++s) g[s] += v * dn[s];
    }
    return g / cell->h;
}

Vec3 CellCorrectors::pi_gradient(int m, int i, int c, const double* xi) const { return scalar_gradient(pi[m][i], m, c, xi); }

Vec3 CellCorrectors::theta_gradient(int m, int i, int c, const double* xi) const {
    return scalar_gradient(theta[m][i], m, c, xi);
}

double interface_flux(const UnitCellMesh& cell, const PhaseSpace& space, const Vec& f, int i, double coef) {
    const auto& R = q1::face_rule();
    double total = 0.0;
    for (const auto& face : cell.interface_faces) {
        bool minus = cell.labels[face.cell_minus] == space.phase;
        int c = minus ? face.cell_minus : face.cell_plus;
        const int t0 = (face.axis + 1) % 3, t1 = (face.axis + 2) % 3;
        auto nodes = cell.cell_nodes(c);
        double sign = minus ? 1.0 : -1.0;
        for (int q = 0; q < R.npts; ++q) {
            double xi[3];
            xi[face.axis] = minus ? 1.0 : 0.0;
            xi[t0] = R.pts[q][0];
            xi[t1] = R.pts[q][1];
            double g = 0.0;
            for (int a = 0; a < 8; ++a) {
                double dn[3];
                q1::shape_grad(a, xi, dn);
                g += f[space.node_dof[nodes[a]]] * dn[face.axis] / cell.h;
            }
            double flux = coef * ((face.axis == i ? 1.0 : 0.0) + g);
            total += sign * flux * R.w[q] * cell.h * cell.h;
        }
    }
    return total;
}

}  // namespace tphom
