#include <gtest/gtest.h>

#include "tphom/errors.hpp"
#include "tphom/unit_cell.hpp"

using namespace tphom;

namespace {
InclusionSpec cube() { return InclusionSpec::box({0.25, 0.25, 0.25}, {0.75, 0.75, 0.75}); }
}

TEST(UnitCell, CubeInclusionVolumesAndInterface) {
    UnitCellMesh m = build_unit_cell(8, cube());
    EXPECT_NEAR(m.phase_volume[1], 0.125, 1e-15);
    EXPECT_NEAR(m.phase_volume[0], 0.875, 1e-15);
    EXPECT_NEAR(m.interface_area, 1.5, 1e-14);
    EXPECT_EQ(m.interface_faces.size(), 6u * 16u);
    EXPECT_TRUE(m.strictly_interior);
}

TEST(UnitCell, RejectsMisalignedBox) {
    EXPECT_THROW(build_unit_cell(8, InclusionSpec::box({0.3, 0.25, 0.25}, {0.75, 0.75, 0.75})), AlignmentError);
}

TEST(UnitCell, RejectsEmptyPhase) {
    EXPECT_THROW(build_unit_cell(4, InclusionSpec::none()), DegenerateGeometryError);
    GeometryOptions g;
    g.allow_empty_phase = true;
    UnitCellMesh m = build_unit_cell(4, InclusionSpec::none(), g);
    EXPECT_DOUBLE_EQ(m.phase_volume[0], 1.0);
    EXPECT_TRUE(m.interface_faces.empty());
}

TEST(UnitCell, BoundaryTouchingInclusionNeedsOverride) {
    EXPECT_THROW(build_unit_cell(4, InclusionSpec::laminate(0, 0.25, 0.75)), DegenerateGeometryError);
    GeometryOptions g;
    g.allow_boundary_inclusion = true;
    UnitCellMesh m = build_unit_cell(4, InclusionSpec::laminate(0, 0.25, 0.75), g);
    EXPECT_FALSE(m.strictly_interior);
    // two interface planes, each a full unit square
    EXPECT_NEAR(m.interface_area, 2.0, 1e-14);
}

TEST(UnitCell, PeriodicNodesWrap) {
    UnitCellMesh m = build_unit_cell(4, cube());
    EXPECT_EQ(m.node(4, 0, 0), m.node(0, 0, 0));
    EXPECT_EQ(m.node(-1, 2, 3), m.node(3, 2, 3));
    for (int d = 0; d < 3; ++d) EXPECT_FALSE(m.periodic_map[d].empty());
    auto nodes = m.cell_nodes(m.cell(3, 3, 3));
    EXPECT_EQ(nodes[7], m.node(0, 0, 0));
}

TEST(UnitCell, ReciprocalEpsilon) {
    EXPECT_EQ(reciprocal_integer(0.25), 4);
    EXPECT_EQ(reciprocal_integer(1.0 / 3.0), 3);
    EXPECT_THROW(reciprocal_integer(0.3), ScaleError);
    EXPECT_THROW(reciprocal_integer(0.0), ScaleError);
    EXPECT_THROW(reciprocal_integer(-0.5), ScaleError);
}

TEST(MicroTiling, DuplicatesOnlyInterfaceNodes) {
    UnitCellMesh c = build_unit_cell(4, cube());
    MicroMesh m = tile_micro_domain(c, 0.5);
    EXPECT_EQ(m.N, 8);
    EXPECT_DOUBLE_EQ(m.h, 1.0 / 8.0);
    int interface_nodes = 0, shared = 0;
    for (int v = 0; v < m.num_nodes(); ++v) {
        if (m.is_interface_node(v)) ++interface_nodes;
        if (m.side_dof[0][v] >= 0 && m.side_dof[0][v] == m.side_dof[1][v]) ++shared;
    }
    // each inclusion copy is a 3x3x3-node block whose 26 surface nodes are duplicated
    EXPECT_EQ(interface_nodes, 8 * 26);
    EXPECT_EQ(shared, 0);
    EXPECT_NEAR(m.interface_area(), 8 * 1.5 * 0.25, 1e-14);
}

TEST(MicroTiling, MergedModeSharesUnknowns) {
    UnitCellMesh c = build_unit_cell(4, cube());
    MicroMesh m = tile_micro_domain(c, 0.5, true);
    EXPECT_EQ(m.n_scalar, m.num_nodes());
}

TEST(MicroTiling, ContractViolations) {
    GeometryOptions g;
    g.allow_boundary_inclusion = true;
    UnitCellMesh lam = build_unit_cell(4, InclusionSpec::laminate(0, 0.25, 0.75), g);
    EXPECT_THROW(tile_micro_domain(lam, 0.5), MeshContractError);
    UnitCellMesh c = build_unit_cell(4, cube());
    EXPECT_THROW(tile_micro_domain(c, 0.3), ScaleError);
}

TEST(UnitCell, ComponentCount) {
    UnitCellMesh c = build_unit_cell(4, cube());
    EXPECT_EQ(count_phase_components(c.labels, 4, 1, true), 1);
    EXPECT_EQ(count_phase_components(c.labels, 4, 2, true), 1);
    std::vector<int> mask(64, 0);
    mask[c.cell(0, 0, 0)] = 1;
    mask[c.cell(2, 2, 2)] = 1;
    UnitCellMesh two = build_unit_cell(4, InclusionSpec::voxels(mask), GeometryOptions{true, false});
    EXPECT_EQ(count_phase_components(two.labels, 4, 2, true), 2);
}
