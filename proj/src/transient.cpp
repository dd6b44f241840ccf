#include "tphom/transient.hpp"

#include "tphom/errors.hpp"

namespace tphom {

class TransientStepper::BlockOperator : public LinearOperator {
public:
    BlockOperator(const TransientBlocks& b, const SpMat& Kss) : b_(b), Kss_(Kss) {}
    Eigen::Index size() const override { return b_.Kuu.rows() + Kss_.rows(); }
    void apply(const Vec& x, Vec& y) const override {
        const Eigen::Index nu = b_.Kuu.rows(), ns = Kss_.rows();
        y.resize(nu + ns);
        y.head(nu).noalias() = b_.Kuu * x.head(nu);
        y.head(nu).noalias() += b_.Kus * x.tail(ns);
        y.tail(ns).noalias() = b_.Ksu * x.head(nu);
        y.tail(ns).noalias() += Kss_ * x.tail(ns);
    }

private:
    const TransientBlocks& b_;
    const SpMat& Kss_;
};

// Block lower-triangular: z_u = MG(r_u), z_s = IC(r_s - Ksu z_u).
class TransientStepper::BlockPreconditioner : public Preconditioner {
public:
    BlockPreconditioner(const TransientBlocks& b, Preconditioner& mu, Preconditioner& ms) : b_(b), mu_(mu), ms_(ms) {}
    void apply(const Vec& r, Vec& z) override {
        const Eigen::Index nu = b_.Kuu.rows(), ns = b_.S.rows();
        z.resize(nu + ns);
        Vec zu, zs;
        mu_.apply(r.head(nu), zu);
        Vec rs = r.tail(ns) - b_.Ksu * zu;
        ms_.apply(rs, zs);
        z.head(nu) = zu;
        z.tail(ns) = zs;
    }

private:
    const TransientBlocks& b_;
    Preconditioner& mu_;
    Preconditioner& ms_;
};

TransientStepper::TransientStepper(const TransientBlocks& b, double dt, const StepSolverOptions& opts)
    : b_(b), dt_(dt), opts_(opts) {
    if (!(dt > 0)) throw ConfigError("time step must be positive");
    Kss_ = b.S + dt * b.D;
    const Eigen::Index nu = b.Kuu.rows(), ns = Kss_.rows();
    if (nu + ns < opts.dense_limit) {
        dense_ = true;
        Eigen::MatrixXd M(nu + ns, nu + ns);
        M.topLeftCorner(nu, nu) = Eigen::MatrixXd(b.Kuu);
        M.topRightCorner(nu, ns) = Eigen::MatrixXd(b.Kus);
        M.bottomLeftCorner(ns, nu) = Eigen::MatrixXd(b.Ksu);
        M.bottomRightCorner(ns, ns) = Eigen::MatrixXd(Kss_);
        lu_.compute(M);
        uu_dense_.compute(Eigen::MatrixXd(b.Kuu));
    } else {
        mg_ = std::make_unique<GeometricMultigrid>(b.Kuu, b.grid_cells, 3);
        ic_ = std::make_unique<IncompleteCholeskyPreconditioner>(Kss_);
    }
}

void TransientStepper::step(const Vec& u0, const Vec& s0, const Vec& Fu, const Vec& Fs, Vec& u, Vec& s) {
    const Eigen::Index nu = b_.Kuu.rows(), ns = Kss_.rows();
    Vec rhs(nu + ns);
    rhs.head(nu) = Fu;
    rhs.tail(ns) = dt_ * Fs + b_.S * s0 + b_.Ksu * u0;
    BlockOperator A(b_, Kss_);
    Vec x(nu + ns);
    const double bnorm = rhs.norm();
    if (bnorm == 0.0) {
        u = Vec::Zero(nu);
        s = Vec::Zero(ns);
        stats_ = {"zero-rhs", 0, 0.0, 0.0};
        return;
    }
    if (dense_) {
        x = lu_.solve(rhs);
        stats_.method = "dense-lu";
        stats_.iterations = 0;
    } else {
        Vec x0(nu + ns);
        x0.head(nu) = u0;
        x0.tail(ns) = s0;
        BlockPreconditioner M(b_, *mg_, *ic_);
        x = fgmres(A, M, rhs, x0, opts_.tol, opts_.restart, opts_.max_iterations, stats_);
    }
    Vec r;
    A.apply(x, r);
    r = rhs - r;
    stats_.residual = r.norm() / bnorm;
    if (!(stats_.residual <= opts_.accept))
        throw SolverError("monolithic step did not reach the residual target", stats_.residual, stats_.iterations);
    u = x.head(nu);
    s = x.tail(ns);
}

Vec TransientStepper::elastostatic(const Vec& Fu, const Vec& s) {
    Vec rhs = Fu - b_.Kus * s;
    if (rhs.norm() == 0.0) return Vec::Zero(rhs.size());
    if (dense_) return uu_dense_.solve(rhs);
    SparseOperator A(b_.Kuu);
    SolveStats st;
    Vec x = fgmres(A, *mg_, rhs, Vec::Zero(rhs.size()), opts_.tol, opts_.restart, opts_.max_iterations, st);
    if (!(st.residual <= opts_.accept)) throw SolverError("elastostatic solve did not converge", st.residual, st.iterations);
    return x;
}

}  // namespace tphom
