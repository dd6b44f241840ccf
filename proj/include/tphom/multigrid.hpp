#pragma once

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <memory>
#include <vector>

#include "tphom/linear_solvers.hpp"

namespace tphom {

// Geometric V-cycle for an operator on `ncomp` interleaved components at the interior nodes of an
// N^3-cell lattice (homogeneous Dirichlet on the lattice boundary). Coarse operators are Galerkin
// products with trilinear prolongation; the hierarchy stops at odd N or a small dense problem.
class GeometricMultigrid : public Preconditioner {
public:
    GeometricMultigrid(const SpMat& A, int N, int ncomp, int coarse_limit = 1500, int smoothing = 2);
    void apply(const Vec& r, Vec& z) override;
    int num_levels() const { return static_cast<int>(levels_.size()); }

private:
    struct Level {
        SpMat A;
        Vec diag;
        SpMat P;  // prolongation from the next coarser level
        int N;
    };
    void cycle(int l, const Vec& b, Vec& x);

    std::vector<Level> levels_;
    Eigen::LDLT<Eigen::MatrixXd> coarse_;
    int ncomp_;
    int smoothing_;
};

SpMat trilinear_prolongation(int N_fine, int ncomp);

class IncompleteCholeskyPreconditioner : public Preconditioner {
public:
    explicit IncompleteCholeskyPreconditioner(const SpMat& A);
    void apply(const Vec& r, Vec& z) override;

private:
    Eigen::IncompleteCholesky<double, Eigen::Lower, Eigen::AMDOrdering<int>> ic_;
};

}  // namespace tphom
