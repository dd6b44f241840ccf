#pragma once

#include <memory>

#include "tphom/linear_solvers.hpp"
#include "tphom/multigrid.hpp"

namespace tphom {

// Backward-Euler step of a quasi-static momentum block coupled to a parabolic scalar block:
//   Kuu u + Kus s                    = Fu
//   Ksu (u - u0) + S (s - s0) + dt D s = dt Fs
// u lives on the interior nodes of an N^3-cell lattice, 3 interleaved components per node.
struct TransientBlocks {
    SpMat Kuu, Kus, Ksu, S, D;
    int grid_cells = 0;
};

struct StepSolverOptions {
    double tol = 1e-10;           // Krylov target
    double accept = 1e-9;         // hard gate on the final relative residual
    int restart = 80;
    int max_iterations = 3000;
    int dense_limit = kDenseLimit;  // monolithic dense LU below this many unknowns
};

class TransientStepper {
public:
    TransientStepper(const TransientBlocks& blocks, double dt, const StepSolverOptions& opts = {});

    void step(const Vec& u0, const Vec& s0, const Vec& Fu, const Vec& Fs, Vec& u, Vec& s);
    // Kuu u = Fu - Kus s
    Vec elastostatic(const Vec& Fu, const Vec& s);

    const SolveStats& last_stats() const { return stats_; }
    bool dense() const { return dense_; }
    double dt() const { return dt_; }
    const SpMat& Kss() const { return Kss_; }

private:
    class BlockOperator;
    class BlockPreconditioner;

    const TransientBlocks& b_;
    double dt_;
    StepSolverOptions opts_;
    SpMat Kss_;
    bool dense_ = false;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    Eigen::LDLT<Eigen::MatrixXd> uu_dense_;
    std::unique_ptr<GeometricMultigrid> mg_;
    std::unique_ptr<IncompleteCholeskyPreconditioner> ic_;
    SolveStats stats_;
};

}  // namespace tphom
