#include <gtest/gtest.h>

#include "tphom/cell_problems.hpp"
#include "tphom/errors.hpp"

using namespace tphom;

namespace {

PhaseParameters contrast() {
    PhaseParameters p;
    p.phase[0] = Phase{1.0, 1.0, 0.5, 0.3, 0.1, 1.0, 1.0, 1.0, 1.0};
    p.phase[1] = Phase{2.0, 2.0, 0.4, 0.2, 0.05, 0.5, 2.0, 3.0, 0.5};
    return p;
}

std::shared_ptr<const UnitCellMesh> cube(int n) {
    return std::make_shared<const UnitCellMesh>(build_unit_cell(n, InclusionSpec::box({0.25, 0.25, 0.25}, {0.75, 0.75, 0.75})));
}

}  // namespace

TEST(CellProblems, HomogeneousMediumHasZeroElasticCorrectors) {
    PhaseParameters p = contrast();
    p.phase[1] = p.phase[0];
    auto w = solve_elastic_correctors(*cube(4), p);
    for (const auto& v : w) EXPECT_EQ(v.cwiseAbs().maxCoeff(), 0.0);
}

TEST(CellProblems, InteriorInclusionCorrectorIsMinusY) {
    auto cell = cube(8);
    CellCorrectors cc = solve_cell_problems(cell, contrast());
    double xi[3] = {0.4, 0.6, 0.5};
    for (int c = 0; c < cell->num_cells(); ++c) {
        if (cell->labels[c] != 2) continue;
        for (int i = 0; i < 3; ++i) {
            Vec3 g = cc.pi_gradient(1, i, c, xi);
            Vec3 t = cc.theta_gradient(1, i, c, xi);
            Vec3 e = Vec3::Zero();
            e[i] = -1.0;
            EXPECT_LT((g - e).norm(), 1e-9);
            EXPECT_LT((t - e).norm(), 1e-9);
        }
    }
}

TEST(CellProblems, SolutionsHaveZeroWeightedMean) {
    auto cell = cube(4);
    CellCorrectors cc = solve_cell_problems(cell, contrast());
    for (int m = 0; m < 2; ++m)
        for (int i = 0; i < 3; ++i) EXPECT_NEAR(cc.space[m].lumped.dot(cc.pi[m][i]), 0.0, 1e-12);
    for (const auto& w : cc.w)
        for (int d = 0; d < 3; ++d) {
            double s = 0;
            for (int v = 0; v < cell->num_nodes(); ++v) s += w[3 * v + d];
            EXPECT_NEAR(s, 0.0, 1e-10);
        }
}

TEST(CellProblems, DenseAndIterativePathsAgree) {
    auto cell = cube(4);
    CellProblemOptions dense;
    dense.solver.kind = SolverKind::Dense;
    CellCorrectors a = solve_cell_problems(cell, contrast());
    CellCorrectors b = solve_cell_problems(cell, contrast(), dense);
    for (int k = 0; k < 6; ++k) EXPECT_LT((a.w[k] - b.w[k]).norm(), 1e-8 * (1 + b.w[k].norm()));
    for (int i = 0; i < 3; ++i) EXPECT_LT((a.pi[0][i] - b.pi[0][i]).norm(), 1e-8 * (1 + b.pi[0][i].norm()));
}

TEST(CellProblems, ZeroNetInterfaceFlux) {
    auto cell = cube(4);
    PhaseParameters p = contrast();
    CellCorrectors cc = solve_cell_problems(cell, p);
    for (int i = 0; i < 3; ++i) {
        // discrete per-phase Neumann problem: net flux through Sigma vanishes to quadrature precision
        EXPECT_NEAR(interface_flux(*cell, cc.space[0], cc.pi[0][i], i, p.phase[0].kappa), 0.0, 1e-10);
    }
}

TEST(CellProblems, ThreadCountDoesNotChangeResults) {
    auto cell = cube(4);
    CellProblemOptions one, four;
    four.threads = 4;
    CellCorrectors a = solve_cell_problems(cell, contrast(), one);
    CellCorrectors b = solve_cell_problems(cell, contrast(), four);
    for (int k = 0; k < 6; ++k) EXPECT_EQ((a.w[k] - b.w[k]).cwiseAbs().maxCoeff(), 0.0);
}

TEST(CellProblems, RejectsNonPositiveCoefficient) {
    auto cell = cube(4);
    EXPECT_THROW(solve_phase_correctors(*cell, build_phase_space(*cell, 1), 0.0), MaterialError);
}

TEST(CellProblems, LaminateCorrectorIsPiecewiseLinear) {
    GeometryOptions g;
    g.allow_boundary_inclusion = true;
    auto cell = std::make_shared<const UnitCellMesh>(build_unit_cell(8, InclusionSpec::laminate(0, 0.25, 0.75), g));
    PhaseParameters p = contrast();
    auto w = solve_elastic_correctors(*cell, p);
    // strain e_11: w^11_1 is piecewise linear in y_0 with slopes fixed by continuity of sigma_11
    const double E1 = p.phase[0].lambda + 2 * p.phase[0].mu, E2 = p.phase[1].lambda + 2 * p.phase[1].mu;
    const double harmonic = 1.0 / (0.5 / E1 + 0.5 / E2);
    double xi[3] = {0.5, 0.5, 0.5};
    CellCorrectors cc;
    cc.cell = cell;
    cc.w = w;
    for (int c = 0; c < cell->num_cells(); ++c) {
        Mat3 G = cc.w_gradient(0, c, xi);
        double E = cell->labels[c] == 1 ? E1 : E2;
        EXPECT_NEAR(G(0, 0), harmonic / E - 1.0, 1e-9);
        EXPECT_NEAR(G(1, 1), 0.0, 1e-9);
    }
}
