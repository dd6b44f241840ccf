#include "tphom/fem.hpp"

#include <string>

#include "tphom/errors.hpp"

namespace tphom {

SpMat build_pattern(const DofTable& rows, const DofTable& cols) {
    std::vector<std::vector<int>> pat(rows.ndofs);
    for (int e = 0; e < rows.nelem(); ++e) {
        const int* rd = rows[e];
        const int* cd = cols[e];
        for (int a = 0; a < rows.width; ++a) {
            if (rd[a] < 0) continue;
            auto& row = pat[rd[a]];
            for (int b = 0; b < cols.width; ++b)
                if (cd[b] >= 0) row.push_back(cd[b]);
        }
    }
    size_t nnz = 0;
    for (auto& row : pat) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        nnz += row.size();
    }
    SpMat A(rows.ndofs, cols.ndofs);
    A.resizeNonZeros(static_cast<Eigen::Index>(nnz));
    int* outer = A.outerIndexPtr();
    int* inner = A.innerIndexPtr();
    double* val = A.valuePtr();
    int pos = 0;
    for (int r = 0; r < rows.ndofs; ++r) {
        outer[r] = pos;
        for (int c : pat[r]) {
            inner[pos] = c;
            val[pos] = 0.0;
            ++pos;
        }
        std::vector<int>().swap(pat[r]);
    }
    outer[rows.ndofs] = pos;
    return A;
}

void scatter_add(SpMat& A, int r, int c, double v) {
    const int start = A.outerIndexPtr()[r], end = A.outerIndexPtr()[r + 1];
    const int* inner = A.innerIndexPtr();
    const int* p = std::lower_bound(inner + start, inner + end, c);
    if (p == inner + end || *p != c) throw AssemblyError("scatter outside sparsity pattern");
    A.valuePtr()[p - inner] += v;
}

Mat8 local_scalar_stiffness(double h, const Mat3& K) {
    const auto& R = q1::reference();
    Mat8 k;
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            double s = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) s += K(i, j) * R.ss[a][b][i][j];
            k(a, b) = s * h;
        }
    return k;
}

Mat8 local_mass(double h) {
    const auto& R = q1::reference();
    Mat8 m;
    const double h3 = h * h * h;
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) m(a, b) = R.mass[a][b] * h3;
    return m;
}

Mat24 local_elastic(double h, const Tensor4& C) {
    const auto& R = q1::reference();
    Mat24 k;
    for (int a = 0; a < 8; ++a)
        for (int i = 0; i < 3; ++i)
            for (int b = 0; b < 8; ++b)
                for (int kk = 0; kk < 3; ++kk) {
                    double s = 0.0;
                    for (int j = 0; j < 3; ++j)
                        for (int l = 0; l < 3; ++l) s += C.c[i][j][kk][l] * R.ss[a][b][j][l];
                    k(3 * a + i, 3 * b + kk) = s * h;
                }
    return k;
}

Mat24x8 local_gradient_coupling(double h, const Mat3& M) {
    const auto& R = q1::reference();
    Mat24x8 k;
    const double h2 = h * h;
    for (int a = 0; a < 8; ++a)
        for (int kk = 0; kk < 3; ++kk)
            for (int b = 0; b < 8; ++b) {
                double s = 0.0;
                for (int i = 0; i < 3; ++i) s += M(kk, i) * R.couple[a][b][i];
                k(3 * a + kk, b) = s * h2;
            }
    return k;
}

Mat8x24 local_strain_coupling(double h, const Mat3& C) {
    const auto& R = q1::reference();
    Mat8x24 k;
    const double h2 = h * h;
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b)
            for (int i = 0; i < 3; ++i) {
                double s = 0.0;
                for (int j = 0; j < 3; ++j) s += C(i, j) * R.couple[a][b][j];
                k(a, 3 * b + i) = s * h2;
            }
    return k;
}

void local_vector_load(double h, const Vec3& x0, const std::function<Vec3(const Vec3&)>& f, double* fe) {
    const double h3 = h * h * h;
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) {
                double xi[3] = {q1::kGauss3[i], q1::kGauss3[j], q1::kGauss3[k]};
                double w = q1::kGauss3w[i] * q1::kGauss3w[j] * q1::kGauss3w[k] * h3;
                Vec3 fx = f(x0 + h * Vec3(xi[0], xi[1], xi[2]));
                for (int a = 0; a < 8; ++a) {
                    double na = q1::shape(a, xi) * w;
                    for (int c = 0; c < 3; ++c) fe[3 * a + c] += na * fx[c];
                }
            }
}

void local_scalar_load(double h, const Vec3& x0, const std::function<double(const Vec3&)>& g, double* fe) {
    const double h3 = h * h * h;
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) {
                double xi[3] = {q1::kGauss3[i], q1::kGauss3[j], q1::kGauss3[k]};
                double w = q1::kGauss3w[i] * q1::kGauss3w[j] * q1::kGauss3w[k] * h3;
                double gx = g(x0 + h * Vec3(xi[0], xi[1], xi[2]));
                for (int a = 0; a < 8; ++a) fe[a] += q1::shape(a, xi) * w * gx;
            }
}

namespace {

bool in_support(int label, Support s) {
    return s == Support::All || (s == Support::Phase1 && label == 1) || (s == Support::Phase2 && label == 2);
}

std::array<int, 8> lattice_cell_nodes(const UnitCellMesh& cell, int c) {
    auto [i, j, k] = cell.cell_ijk(c);
    std::array<int, 8> v;
    for (int a = 0; a < 8; ++a) v[a] = cell.lattice_node(i + (a & 1), j + ((a >> 1) & 1), k + ((a >> 2) & 1));
    return v;
}

}  // namespace

DofTable unit_cell_scalar_table(const UnitCellMesh& cell, Support support, bool periodic) {
    DofTable t;
    t.width = 8;
    t.ndofs = periodic ? cell.num_nodes() : (cell.n + 1) * (cell.n + 1) * (cell.n + 1);
    t.dofs.assign(static_cast<size_t>(cell.num_cells()) * 8, -1);
    bool any = false;
    for (int c = 0; c < cell.num_cells(); ++c) {
        if (!in_support(cell.labels[c], support)) continue;
        any = true;
        auto nodes = periodic ? cell.cell_nodes(c) : lattice_cell_nodes(cell, c);
        for (int a = 0; a < 8; ++a) t.dofs[static_cast<size_t>(c) * 8 + a] = nodes[a];
    }
    if (!any) throw DegenerateGeometryError("scalar assembly support is empty");
    return t;
}

DofTable unit_cell_vector_table(const UnitCellMesh& cell, bool periodic) {
    DofTable t;
    t.width = 24;
    int nn = periodic ? cell.num_nodes() : (cell.n + 1) * (cell.n + 1) * (cell.n + 1);
    t.ndofs = 3 * nn;
    t.dofs.resize(static_cast<size_t>(cell.num_cells()) * 24);
    for (int c = 0; c < cell.num_cells(); ++c) {
        auto nodes = periodic ? cell.cell_nodes(c) : lattice_cell_nodes(cell, c);
        for (int a = 0; a < 8; ++a)
            for (int d = 0; d < 3; ++d) t.dofs[static_cast<size_t>(c) * 24 + 3 * a + d] = 3 * nodes[a] + d;
    }
    return t;
}

SpMat assemble_scalar_stiffness(const UnitCellMesh& cell, const std::vector<double>& coef, Support support,
                                bool periodic) {
    DofTable t = unit_cell_scalar_table(cell, support, periodic);
    for (int c = 0; c < cell.num_cells(); ++c)
        if (in_support(cell.labels[c], support) && !(coef[c] > 0))
            throw MaterialError("scalar coefficient must be positive on its support");
    return assemble(t, t, [&](int e, double* ke) {
        if (!in_support(cell.labels[e], support)) return false;
        Eigen::Map<Eigen::Matrix<double, 8, 8, Eigen::RowMajor>>{ke} = local_scalar_stiffness(cell.h, coef[e] * Mat3::Identity());
        return true;
    });
}

SpMat assemble_elastic_stiffness(const UnitCellMesh& cell, const std::vector<Tensor4>& C, bool periodic) {
    DofTable t = unit_cell_vector_table(cell, periodic);
    return assemble(t, t, [&](int e, double* ke) {
        Eigen::Map<Eigen::Matrix<double, 24, 24, Eigen::RowMajor>>{ke} = local_elastic(cell.h, C[e]);
        return true;
    });
}

SpMat assemble_elastic_stiffness(const UnitCellMesh& cell, const std::vector<std::array<double, 2>>& lame, bool periodic) {
    std::vector<Tensor4> C(lame.size());
    for (size_t c = 0; c < lame.size(); ++c) {
        if (!(lame[c][1] > 0)) throw MaterialError("shear modulus must be positive");
        if (lame[c][0] < 0) throw MaterialError("Lame lambda must be nonnegative");
        C[c] = Tensor4::isotropic(lame[c][0], lame[c][1]);
    }
    return assemble_elastic_stiffness(cell, C, periodic);
}

std::array<std::array<int, 3>, 4> face_node_positions(const InterfaceFace& f) {
    const int t0 = (f.axis + 1) % 3, t1 = (f.axis + 2) % 3;
    std::array<std::array<int, 3>, 4> p;
    for (int b = 0; b < 4; ++b) {
        p[b] = f.pos;
        p[b][t0] += b & 1;
        p[b][t1] += (b >> 1) & 1;
    }
    return p;
}

Eigen::Matrix4d local_face_mass(double h, const InterfaceFace& f, const std::function<double(const Vec3&)>& coef) {
    const auto& R = q1::face_rule();
    const int t0 = (f.axis + 1) % 3, t1 = (f.axis + 2) % 3;
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    for (int q = 0; q < R.npts; ++q) {
        Vec3 x;
        x[f.axis] = f.pos[f.axis] * h;
        x[t0] = (f.pos[t0] + R.pts[q][0]) * h;
        x[t1] = (f.pos[t1] + R.pts[q][1]) * h;
        double w = R.w[q] * h * h * coef(x);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) m(a, b) += w * R.shape[q][a] * R.shape[q][b];
    }
    return m;
}

SpMat assemble_interface_coupling(const MicroMesh& micro, const Profile& barrier) {
    if (micro.merged) throw MeshContractError("interface coupling needs duplicated interface unknowns");
    DofTable t;
    t.width = 8;
    t.ndofs = micro.n_scalar;
    t.dofs.resize(micro.interface_faces.size() * 8);
    for (size_t f = 0; f < micro.interface_faces.size(); ++f) {
        auto pos = face_node_positions(micro.interface_faces[f]);
        for (int b = 0; b < 4; ++b) {
            int v = micro.node(pos[b][0], pos[b][1], pos[b][2]);
            int d1 = micro.side_dof[0][v], d2 = micro.side_dof[1][v];
            if (d1 < 0 || d2 < 0 || d1 == d2) throw MeshContractError("interface node lacks duplicated unknowns");
            t.dofs[f * 8 + b] = d1;
            t.dofs[f * 8 + 4 + b] = d2;
        }
    }
    const double eps = micro.epsilon;
    auto coef = [&](const Vec3& x) {
        Vec3 y(fractional(x[0] / eps), fractional(x[1] / eps), fractional(x[2] / eps));
        return eps * barrier(y);
    };
    return assemble(t, t, [&](int e, double* ke) {
        Eigen::Matrix4d m = local_face_mass(micro.h, micro.interface_faces[e], coef);
        Eigen::Map<Eigen::Matrix<double, 8, 8, Eigen::RowMajor>> K(ke);
        K.topLeftCorner<4, 4>() = m;
        K.bottomRightCorner<4, 4>() = m;
        K.topRightCorner<4, 4>() = -m;
        K.bottomLeftCorner<4, 4>() = -m;
        return true;
    });
}

}  // namespace tphom
