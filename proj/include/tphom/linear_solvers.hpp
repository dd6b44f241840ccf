#pragma once

#include <string>
#include <vector>

#include "tphom/fem.hpp"

namespace tphom {

struct SolveStats {
    std::string method;
    int iterations = 0;
    double residual = 0.0;          // final relative residual
    double kernel_component = 0.0;  // relative rhs component removed before solving
};

enum class SolverKind { ConjugateGradient, Dense };

struct SolverOptions {
    double tol = 1e-10;
    int max_iterations = 20000;
    SolverKind kind = SolverKind::ConjugateGradient;
};

// Null space of a symmetric semidefinite operator. Vectors must be mutually orthogonal
// (component indicators, per-component translations). Weights are lumped masses used to
// pick the zero-mean representative; empty means uniform.
struct NullSpace {
    std::vector<Vec> vectors;
    Vec weights;
    // Norm of the right-hand side before cancellation between elements; a rhs below 1e-13 of it is treated as zero.
    double rhs_scale = 0.0;
};

inline constexpr int kDenseLimit = 5000;
inline constexpr double kConsistencyTol = 1e-10;

// Solves A x = b on the orthogonal complement of the null space, returning the weighted
// zero-mean representative. Throws ConsistencyError if b has a kernel component above
// kConsistencyTol (relative), SolverError on non-convergence.
Vec solve_constrained(const SpMat& A, const Vec& b, const NullSpace& ker, const SolverOptions& opts = {},
                      SolveStats* stats = nullptr);

// Jacobi-preconditioned CG with iterates projected onto the complement of the orthonormal basis q.
Vec pcg_jacobi(const SpMat& A, const Vec& b, const std::vector<Vec>& q, double tol, int max_iterations,
               SolveStats& stats);

class LinearOperator {
public:
    virtual ~LinearOperator() = default;
    virtual Eigen::Index size() const = 0;
    virtual void apply(const Vec& x, Vec& y) const = 0;
};

class Preconditioner {
public:
    virtual ~Preconditioner() = default;
    virtual void apply(const Vec& r, Vec& z) = 0;
};

class SparseOperator : public LinearOperator {
public:
    explicit SparseOperator(const SpMat& A) : A_(A) {}
    Eigen::Index size() const override { return A_.rows(); }
    void apply(const Vec& x, Vec& y) const override { y.noalias() = A_ * x; }

private:
    const SpMat& A_;
};

class IdentityPreconditioner : public Preconditioner {
public:
    void apply(const Vec& r, Vec& z) override { z = r; }
};

// Right-preconditioned flexible GMRES(restart). Returns when ||b - A x|| <= tol ||b||.
Vec fgmres(const LinearOperator& A, Preconditioner& M, const Vec& b, const Vec& x0, double tol, int restart,
           int max_iterations, SolveStats& stats);

// Symmetric Gauss-Seidel sweep (forward then backward) on A x = b.
void symmetric_gauss_seidel(const SpMat& A, const Vec& diag, const Vec& b, Vec& x);

}  // namespace tphom
