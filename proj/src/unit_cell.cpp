#include "tphom/unit_cell.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "tphom/errors.hpp"

namespace tphom {

namespace {

int grid_line(double x, int n, const char* what) {
    double s = x * n;
    double r = std::round(s);
    if (std::abs(s - r) > 1e-9 || r < 0 || r > n)
        throw AlignmentError(std::string("inclusion bound ") + what + "=" + std::to_string(x) +
                             " is not on a grid line of resolution " + std::to_string(n));
    return static_cast<int>(r);
}

}  // namespace

Vec3 UnitCellMesh::cell_center(int c) const {
    auto ijk = cell_ijk(c);
    return Vec3((ijk[0] + 0.5) * h, (ijk[1] + 0.5) * h, (ijk[2] + 0.5) * h);
}

std::array<int, 8> UnitCellMesh::cell_nodes(int c) const {
    auto [i, j, k] = cell_ijk(c);
    std::array<int, 8> v;
    for (int a = 0; a < 8; ++a) v[a] = node(i + (a & 1), j + ((a >> 1) & 1), k + ((a >> 2) & 1));
    return v;
}

UnitCellMesh build_unit_cell(int n, const InclusionSpec& inc, const GeometryOptions& opts) {
    if (n < 2) throw DegenerateGeometryError("unit-cell resolution must be at least 2");
    UnitCellMesh m;
    m.n = n;
    m.h = 1.0 / n;
    m.labels.assign(static_cast<size_t>(n) * n * n, 1);

    switch (inc.kind) {
        case InclusionSpec::Kind::Box: {
            std::array<int, 3> lo, hi;
            const char* names[3] = {"x", "y", "z"};
            for (int d = 0; d < 3; ++d) {
                lo[d] = grid_line(inc.lo[d], n, names[d]);
                hi[d] = grid_line(inc.hi[d], n, names[d]);
                if (hi[d] < lo[d]) throw AlignmentError("inclusion box has hi < lo");
            }
            for (int k = lo[2]; k < hi[2]; ++k)
                for (int j = lo[1]; j < hi[1]; ++j)
                    for (int i = lo[0]; i < hi[0]; ++i) m.labels[m.cell(i, j, k)] = 2;
            break;
        }
        case InclusionSpec::Kind::Mask:
            if (inc.mask.size() != m.labels.size())
                throw AlignmentError("voxel mask has " + std::to_string(inc.mask.size()) + " entries, expected " +
                                     std::to_string(m.labels.size()));
            for (size_t c = 0; c < inc.mask.size(); ++c) m.labels[c] = inc.mask[c] ? 2 : 1;
            break;
        case InclusionSpec::Kind::None:
            break;
    }

    size_t n2 = 0;
    for (auto l : m.labels) n2 += (l == 2);
    const size_t total = m.labels.size();
    m.phase_volume[1] = static_cast<double>(n2) / static_cast<double>(total);
    m.phase_volume[0] = static_cast<double>(total - n2) / static_cast<double>(total);
    if (!opts.allow_empty_phase) {
        if (n2 == total) throw DegenerateGeometryError("phase 1 is empty");
        if (n2 == 0) throw DegenerateGeometryError("phase 2 is empty");
    }

    m.strictly_interior = true;
    for (int c = 0; c < m.num_cells(); ++c) {
        if (m.labels[c] != 2) continue;
        auto ijk = m.cell_ijk(c);
        for (int d = 0; d < 3; ++d)
            if (ijk[d] == 0 || ijk[d] == n - 1) m.strictly_interior = false;
    }
    if (!m.strictly_interior && n2 > 0 && n2 < total && !opts.allow_boundary_inclusion)
        throw DegenerateGeometryError(
            "inclusion touches the cell boundary; set allow_boundary_inclusion to permit connected phase 2");

    for (int axis = 0; axis < 3; ++axis)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    std::array<int, 3> p{i, j, k};
                    std::array<int, 3> q = p;
                    q[axis] += 1;
                    int a = m.cell(i, j, k);
                    int b = m.cell(m.wrap(q[0]), m.wrap(q[1]), m.wrap(q[2]));
                    if (m.labels[a] != m.labels[b]) m.interface_faces.push_back({axis, q, a, b});
                }
    m.interface_area = static_cast<double>(m.interface_faces.size()) * m.h * m.h;

    for (int axis = 0; axis < 3; ++axis)
        for (int b = 0; b <= n; ++b)
            for (int a = 0; a <= n; ++a) {
                std::array<int, 3> lo{}, hi{};
                int t0 = (axis + 1) % 3, t1 = (axis + 2) % 3;
                lo[axis] = 0;
                hi[axis] = n;
                lo[t0] = hi[t0] = a;
                lo[t1] = hi[t1] = b;
                int x = m.lattice_node(lo[0], lo[1], lo[2]);
                int y = m.lattice_node(hi[0], hi[1], hi[2]);
                m.periodic_map[axis].emplace_back(x, y);
                m.periodic_map[axis].emplace_back(y, x);
            }
    return m;
}

int reciprocal_integer(double epsilon) {
    if (!(epsilon > 0.0) || epsilon > 1.0) throw ScaleError("epsilon must lie in (0, 1]");
    double inv = 1.0 / epsilon;
    double r = std::round(inv);
    if (std::abs(inv - r) > 1e-9 * r) throw ScaleError("epsilon=" + std::to_string(epsilon) + " is not 1/k for an integer k");
    return static_cast<int>(r);
}

std::array<int, 8> MicroMesh::cell_nodes(int c) const {
    auto [i, j, k] = cell_ijk(c);
    std::array<int, 8> v;
    for (int a = 0; a < 8; ++a) v[a] = node(i + (a & 1), j + ((a >> 1) & 1), k + ((a >> 2) & 1));
    return v;
}

MicroMesh tile_micro_domain(const UnitCellMesh& cell, double epsilon, bool merged) {
    const int k = reciprocal_integer(epsilon);
    bool two_phase = cell.phase_volume[1] > 0.0 && cell.phase_volume[0] > 0.0;
    if (two_phase && !cell.strictly_interior && k > 1)
        throw MeshContractError("tiling requires a strictly interior inclusion");
    MicroMesh m;
    m.epsilon = 1.0 / k;
    m.k = k;
    m.n_cell = cell.n;
    m.N = k * cell.n;
    m.h = 1.0 / m.N;
    m.merged = merged;
    const int N = m.N;
    m.labels.resize(static_cast<size_t>(N) * N * N);
    for (int kk = 0; kk < N; ++kk)
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i) m.labels[m.cell(i, j, kk)] = static_cast<std::uint8_t>(cell.label(i, j, kk));

    for (int axis = 0; axis < 3; ++axis)
        for (int kk = 0; kk < N; ++kk)
            for (int j = 0; j < N; ++j)
                for (int i = 0; i < N; ++i) {
                    std::array<int, 3> q{i, j, kk};
                    q[axis] += 1;
                    if (q[axis] >= N) continue;
                    int a = m.cell(i, j, kk);
                    int b = m.cell(q[0], q[1], q[2]);
                    if (m.labels[a] != m.labels[b]) m.interface_faces.push_back({axis, q, a, b});
                }

    const int nn = m.num_nodes();
    std::vector<std::uint8_t> touches(nn, 0);
    for (int c = 0; c < m.num_cells(); ++c) {
        std::uint8_t bit = m.labels[c] == 1 ? 1 : 2;
        for (int v : m.cell_nodes(c)) touches[v] |= bit;
    }
    m.side_dof[0].assign(nn, -1);
    m.side_dof[1].assign(nn, -1);
    m.on_boundary.assign(nn, 0);
    int next = 0;
    for (int v = 0; v < nn; ++v) {
        auto ijk = m.node_ijk(v);
        for (int d = 0; d < 3; ++d)
            if (ijk[d] == 0 || ijk[d] == N) m.on_boundary[v] = 1;
        if (merged) {
            m.side_dof[0][v] = m.side_dof[1][v] = next++;
            continue;
        }
        if (touches[v] & 1) m.side_dof[0][v] = next++;
        if (touches[v] & 2) m.side_dof[1][v] = next++;
    }
    m.n_scalar = next;
    return m;
}

int count_phase_components(const std::vector<std::uint8_t>& labels, int n, int phase, bool periodic) {
    std::vector<int> parent(labels.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto idx = [n](int i, int j, int k) { return i + n * (j + n * k); };
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                int a = idx(i, j, k);
                if (labels[a] != phase) continue;
                for (int d = 0; d < 3; ++d) {
                    std::array<int, 3> q{i, j, k};
                    q[d] += 1;
                    if (q[d] == n) {
                        if (!periodic) continue;
                        q[d] = 0;
                    }
                    int b = idx(q[0], q[1], q[2]);
                    if (labels[b] == phase) parent[find(a)] = find(b);
                }
            }
    int count = 0;
    for (size_t a = 0; a < labels.size(); ++a)
        if (labels[a] == phase && find(static_cast<int>(a)) == static_cast<int>(a)) ++count;
    return count;
}

}  // namespace tphom
