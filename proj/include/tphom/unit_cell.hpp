#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "tphom/tensor.hpp"

namespace tphom {

struct InclusionSpec {
    enum class Kind { Box, Mask, None };
    Kind kind = Kind::Box;
    std::array<double, 3> lo{0.25, 0.25, 0.25};
    std::array<double, 3> hi{0.75, 0.75, 0.75};
    std::vector<int> mask;  // n^3 entries, nonzero marks phase 2; index i + n*(j + n*k)

    static InclusionSpec box(std::array<double, 3> lo, std::array<double, 3> hi) {
        InclusionSpec s;
        s.lo = lo;
        s.hi = hi;
        return s;
    }
    static InclusionSpec voxels(std::vector<int> m) {
        InclusionSpec s;
        s.kind = Kind::Mask;
        s.mask = std::move(m);
        return s;
    }
    static InclusionSpec none() {
        InclusionSpec s;
        s.kind = Kind::None;
        return s;
    }
    // Slab of phase 2 normal to `axis`, spanning the cell in the other two directions.
    static InclusionSpec laminate(int axis, double a, double b) {
        InclusionSpec s;
        s.lo = {0, 0, 0};
        s.hi = {1, 1, 1};
        s.lo[axis] = a;
        s.hi[axis] = b;
        return s;
    }
};

struct GeometryOptions {
    bool allow_boundary_inclusion = false;  // connected phase 2 (laminates); oracle use
    bool allow_empty_phase = false;         // single-phase cells
};

// Quadrilateral face between two cells of different labels.
struct InterfaceFace {
    int axis;                // normal direction
    std::array<int, 3> pos;  // lattice coordinates of the face's lower corner; pos[axis] is the plane
    int cell_minus;          // cell below the plane along axis
    int cell_plus;           // cell above
};

class UnitCellMesh {
public:
    int n = 0;
    double h = 0.0;
    std::vector<std::uint8_t> labels;  // 1 or 2 per cell, index i + n*(j + n*k)
    std::vector<InterfaceFace> interface_faces;
    // Per axis: (node on x_axis = 0, node on x_axis = 1) pairs and their reverses, lattice ids over (n+1)^3.
    std::array<std::vector<std::pair<int, int>>, 3> periodic_map;
    std::array<double, 2> phase_volume{0.0, 0.0};
    double interface_area = 0.0;
    bool strictly_interior = false;

    int cell(int i, int j, int k) const { return i + n * (j + n * k); }
    int label(int i, int j, int k) const { return labels[cell(wrap(i), wrap(j), wrap(k))]; }
    int wrap(int i) const { return ((i % n) + n) % n; }
    // Periodic node id (n^3 distinct nodes).
    int node(int i, int j, int k) const { return wrap(i) + n * (wrap(j) + n * wrap(k)); }
    int lattice_node(int i, int j, int k) const { return i + (n + 1) * (j + (n + 1) * k); }
    std::array<int, 3> cell_ijk(int c) const { return {c % n, (c / n) % n, c / (n * n)}; }
    Vec3 cell_center(int c) const;
    int num_cells() const { return n * n * n; }
    int num_nodes() const { return n * n * n; }
    // Periodic node ids of the 8 corners of cell c.
    std::array<int, 8> cell_nodes(int c) const;
};

UnitCellMesh build_unit_cell(int resolution, const InclusionSpec& inclusion, const GeometryOptions& opts = {});

// Returns k for epsilon = 1/k; throws ScaleError otherwise.
int reciprocal_integer(double epsilon);

class MicroMesh {
public:
    double epsilon = 1.0;
    int k = 1;       // cell copies per axis
    int n_cell = 0;  // unit-cell resolution
    int N = 0;       // micro cells per axis
    double h = 0.0;
    bool merged = false;  // single-valued p, theta (no interface duplication)
    std::vector<std::uint8_t> labels;
    std::vector<InterfaceFace> interface_faces;
    std::array<std::vector<int>, 2> side_dof;  // per lattice node: scalar index on side m, -1 if absent
    int n_scalar = 0;
    std::vector<std::uint8_t> on_boundary;  // per lattice node

    int cell(int i, int j, int k) const { return i + N * (j + N * k); }
    int node(int i, int j, int k) const { return i + (N + 1) * (j + (N + 1) * k); }
    std::array<int, 3> cell_ijk(int c) const { return {c % N, (c / N) % N, c / (N * N)}; }
    std::array<int, 3> node_ijk(int v) const { return {v % (N + 1), (v / (N + 1)) % (N + 1), v / ((N + 1) * (N + 1))}; }
    int num_cells() const { return N * N * N; }
    int num_nodes() const { return (N + 1) * (N + 1) * (N + 1); }
    std::array<int, 8> cell_nodes(int c) const;
    double interface_area() const { return static_cast<double>(interface_faces.size()) * h * h; }
    bool is_interface_node(int v) const { return side_dof[0][v] >= 0 && side_dof[1][v] >= 0 && side_dof[0][v] != side_dof[1][v]; }
};

MicroMesh tile_micro_domain(const UnitCellMesh& cell, double epsilon, bool merged = false);

// Number of face-connected components of phase `phase` among the cells of a periodic or non-periodic grid.
int count_phase_components(const std::vector<std::uint8_t>& labels, int n, int phase, bool periodic);

}  // namespace tphom
