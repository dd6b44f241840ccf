#pragma once

#include <Eigen/Sparse>
#include <algorithm>
#include <functional>
#include <vector>

#include "tphom/materials.hpp"
#include "tphom/reference_element.hpp"
#include "tphom/tensor.hpp"
#include "tphom/unit_cell.hpp"

namespace tphom {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Vec = Eigen::VectorXd;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Mat24 = Eigen::Matrix<double, 24, 24>;
using Mat24x8 = Eigen::Matrix<double, 24, 8>;
using Mat8x24 = Eigen::Matrix<double, 8, 24>;

// Element-to-dof table: `width` dofs per element, -1 marks a dof that is absent or constrained.
struct DofTable {
    int ndofs = 0;
    int width = 0;
    std::vector<int> dofs;

    int nelem() const { return width ? static_cast<int>(dofs.size()) / width : 0; }
    const int* operator[](int e) const { return dofs.data() + static_cast<size_t>(e) * width; }
};

// Sparsity pattern (all zeros) covering every (row, col) pair that shares an element.
SpMat build_pattern(const DofTable& rows, const DofTable& cols);

void scatter_add(SpMat& A, int r, int c, double v);

// kernel(e, Ke) fills a row-major rows.width x cols.width block; returning false skips element e.
template <class Kernel>
SpMat assemble(const DofTable& rows, const DofTable& cols, Kernel&& kernel) {
    SpMat A = build_pattern(rows, cols);
    std::vector<double> ke(static_cast<size_t>(rows.width) * cols.width);
    const int ne = rows.nelem();
    for (int e = 0; e < ne; ++e) {
        std::fill(ke.begin(), ke.end(), 0.0);
        if (!kernel(e, ke.data())) continue;
        const int* rd = rows[e];
        const int* cd = cols[e];
        for (int a = 0; a < rows.width; ++a) {
            if (rd[a] < 0) continue;
            const int start = A.outerIndexPtr()[rd[a]];
            const int end = A.outerIndexPtr()[rd[a] + 1];
            const int* inner = A.innerIndexPtr();
            for (int b = 0; b < cols.width; ++b) {
                if (cd[b] < 0) continue;
                double v = ke[static_cast<size_t>(a) * cols.width + b];
                if (v == 0.0) continue;
                const int* p = std::lower_bound(inner + start, inner + end, cd[b]);
                A.valuePtr()[p - inner] += v;
            }
        }
    }
    return A;
}

// kernel(e, fe) fills rows.width entries.
template <class Kernel>
Vec assemble_vector(const DofTable& rows, Kernel&& kernel) {
    Vec f = Vec::Zero(rows.ndofs);
    std::vector<double> fe(rows.width);
    for (int e = 0; e < rows.nelem(); ++e) {
        std::fill(fe.begin(), fe.end(), 0.0);
        if (!kernel(e, fe.data())) continue;
        const int* rd = rows[e];
        for (int a = 0; a < rows.width; ++a)
            if (rd[a] >= 0) f[rd[a]] += fe[a];
    }
    return f;
}

// Local element matrices on a cube of edge h. Vector dofs are ordered (a, component) -> 3a + c.
Mat8 local_scalar_stiffness(double h, const Mat3& K);
Mat8 local_mass(double h);
Mat24 local_elastic(double h, const Tensor4& C);
// Rows (a,k), cols b: int N_a sum_i M_ki d_i N_b. Discretizes (M grad p) . v.
Mat24x8 local_gradient_coupling(double h, const Mat3& M);
// Rows a, cols (b,i): int N_a sum_j C_ij d_j N_b. Discretizes (C : e(u)) q for symmetric C.
Mat8x24 local_strain_coupling(double h, const Mat3& C);

// Element load for a vector field f sampled with a 3x3x3 Gauss rule on the cell with lower corner x0.
void local_vector_load(double h, const Vec3& x0, const std::function<Vec3(const Vec3&)>& f, double* fe);
void local_scalar_load(double h, const Vec3& x0, const std::function<double(const Vec3&)>& g, double* fe);

enum class Support { Phase1, Phase2, All };

// Operations on the unit cell. `periodic` selects the periodic node space (n^3) or the
// natural-boundary lattice ((n+1)^3).
DofTable unit_cell_scalar_table(const UnitCellMesh& cell, Support support, bool periodic = true);
DofTable unit_cell_vector_table(const UnitCellMesh& cell, bool periodic = true);

SpMat assemble_scalar_stiffness(const UnitCellMesh& cell, const std::vector<double>& coefficient, Support support,
                                bool periodic = true);
SpMat assemble_elastic_stiffness(const UnitCellMesh& cell, const std::vector<Tensor4>& stiffness, bool periodic = true);
// Isotropic convenience overload; throws MaterialError for mu <= 0 or lambda < 0.
SpMat assemble_elastic_stiffness(const UnitCellMesh& cell, const std::vector<std::array<double, 2>>& lame,
                                 bool periodic = true);

// Interface jump form int_{Sigma^eps} eps*barrier(x/eps) (p1-p2)(q1-q2) on the duplicated scalar space.
SpMat assemble_interface_coupling(const MicroMesh& micro, const Profile& barrier);

// Surface mass on one interface face, coefficient evaluated at physical points.
Eigen::Matrix4d local_face_mass(double h, const InterfaceFace& f, const std::function<double(const Vec3&)>& coef);
// Lattice node offsets of the 4 face nodes (b = t0 + 2 t1).
std::array<std::array<int, 3>, 4> face_node_positions(const InterfaceFace& f);

inline double fractional(double x) { return x - std::floor(x); }

}  // namespace tphom
