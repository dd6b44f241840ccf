#include "tphom/linear_solvers.hpp"

#include <cmath>

#include "tphom/errors.hpp"
#include "tphom/log.hpp"

namespace tphom {

namespace {

void project(Vec& x, const std::vector<Vec>& q) {
    for (const auto& v : q) x -= v.dot(x) * v;
}

std::vector<Vec> orthonormalize(const std::vector<Vec>& raw) {
    std::vector<Vec> q;
    for (const auto& v : raw) {
        Vec w = v;
        for (const auto& u : q) w -= u.dot(w) * u;
        double n = w.norm();
        if (n > 1e-14 * std::max(1.0, v.norm())) q.push_back(w / n);
    }
    return q;
}

}  // namespace

Vec pcg_jacobi(const SpMat& A, const Vec& b, const std::vector<Vec>& q, double tol, int maxit, SolveStats& st) {
    const Eigen::Index n = A.rows();
    Vec x = Vec::Zero(n);
    Vec dinv = A.diagonal();
    for (Eigen::Index i = 0; i < n; ++i) dinv[i] = dinv[i] > 0 ? 1.0 / dinv[i] : 0.0;
    Vec r = b;
    project(r, q);
    const double bnorm = r.norm();
    st.method = "pcg-jacobi";
    st.iterations = 0;
    if (bnorm == 0.0) {
        st.residual = 0.0;
        return x;
    }
    Vec z = dinv.cwiseProduct(r);
    project(z, q);
    Vec p = z;
    Vec Ap(n);
    double rz = r.dot(z);
    double res = 1.0;
    int it = 0;
    for (; it < maxit; ++it) {
        Ap.noalias() = A * p;
        double pAp = p.dot(Ap);
        if (pAp <= 0) break;
        double alpha = rz / pAp;
        x += alpha * p;
        r -= alpha * Ap;
        project(r, q);
        res = r.norm() / bnorm;
        if (res <= tol) {
            ++it;
            break;
        }
        z = dinv.cwiseProduct(r);
        project(z, q);
        double rz_new = r.dot(z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
    }
    project(x, q);
    Vec rr = b;
    project(rr, q);
    rr -= A * x;
    st.residual = rr.norm() / bnorm;
    st.iterations = it;
    if (!(st.residual <= tol * 10.0)) throw SolverError("conjugate gradient did not converge", st.residual, it);
    return x;
}

Vec solve_constrained(const SpMat& A, const Vec& b, const NullSpace& ker, const SolverOptions& opts, SolveStats* out) {
    SolveStats st;
    const Eigen::Index n = A.rows();
    std::vector<Vec> q = orthonormalize(ker.vectors);
    double bnorm = b.norm();
    if (bnorm <= 1e-13 * ker.rhs_scale) bnorm = 0.0;
    double kc = 0.0;
    for (const auto& v : q) kc += std::pow(v.dot(b), 2);
    kc = bnorm > 0 ? std::sqrt(kc) / bnorm : 0.0;
    st.kernel_component = kc;
    if (kc > kConsistencyTol)
        throw ConsistencyError("right-hand side has a kernel component of relative size " + std::to_string(kc));
    if (kc > 1e-13) log::warn("projected a kernel component of relative size " + std::to_string(kc) + " out of the rhs");

    Vec x;
    if (bnorm == 0.0) {
        x = Vec::Zero(n);
        st.method = "zero-rhs";
    } else if (opts.kind == SolverKind::Dense) {
        if (n >= kDenseLimit) throw SolverError("dense path limited to fewer than 5000 unknowns", 0.0, 0);
        Eigen::MatrixXd D = Eigen::MatrixXd(A);
        double scale = A.diagonal().cwiseAbs().maxCoeff();
        if (scale == 0) scale = 1;
        for (const auto& v : q) D += scale * v * v.transpose();
        Vec rhs = b;
        project(rhs, q);
        x = D.ldlt().solve(rhs);
        project(x, q);
        Vec r = rhs - A * x;
        st.method = "dense-ldlt";
        st.residual = rhs.norm() > 0 ? r.norm() / rhs.norm() : 0.0;
        if (!(st.residual <= opts.tol)) throw SolverError("dense solve residual above tolerance", st.residual, 0);
    } else {
        x = pcg_jacobi(A, b, q, opts.tol, opts.max_iterations, st);
    }

    // Weighted zero-mean representative per kernel vector (supports are disjoint or orthogonal).
    for (const auto& v : ker.vectors) {
        Vec wv = ker.weights.size() ? Vec(ker.weights.cwiseProduct(v)) : v;
        double den = wv.dot(v);
        if (den > 0) x -= (wv.dot(x) / den) * v;
    }
    if (out) *out = st;
    return x;
}

Vec fgmres(const LinearOperator& A, Preconditioner& M, const Vec& b, const Vec& x0, double tol, int restart, int maxit,
           SolveStats& st) {
    const Eigen::Index n = A.size();
    st.method = "fgmres";
    Vec x = x0;
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        st.residual = 0.0;
        st.iterations = 0;
        return Vec::Zero(n);
    }
    Vec r(n), w(n);
    A.apply(x, w);
    r = b - w;
    double beta = r.norm();
    int total = 0;
    std::vector<Vec> V, Z;
    Eigen::MatrixXd H;
    while (beta / bnorm > tol && total < maxit) {
        V.assign(1, r / beta);
        Z.clear();
        H = Eigen::MatrixXd::Zero(restart + 1, restart);
        Vec g = Vec::Zero(restart + 1);
        g[0] = beta;
        std::vector<double> cs(restart), sn(restart);
        int j = 0;
        for (; j < restart && total < maxit; ++j, ++total) {
            Vec z(n);
            M.apply(V[j], z);
            Z.push_back(z);
            A.apply(z, w);
            for (int i = 0; i <= j; ++i) {
                H(i, j) = w.dot(V[i]);
                w -= H(i, j) * V[i];
            }
            H(j + 1, j) = w.norm();
            for (int i = 0; i < j; ++i) {
                double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
                H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
                H(i, j) = t;
            }
            double den = std::hypot(H(j, j), H(j + 1, j));
            cs[j] = den > 0 ? H(j, j) / den : 1.0;
            sn[j] = den > 0 ? H(j + 1, j) / den : 0.0;
            H(j, j) = den;
            H(j + 1, j) = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];
            if (std::abs(g[j + 1]) / bnorm <= tol) {
                ++j;
                ++total;
                break;
            }
            double hn = w.norm();
            if (hn == 0.0) {
                ++j;
                ++total;
                break;
            }
            V.push_back(w / hn);
        }
        Vec y = H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
        for (int i = 0; i < j; ++i) x += y[i] * Z[i];
        A.apply(x, w);
        r = b - w;
        beta = r.norm();
    }
    st.iterations = total;
    st.residual = beta / bnorm;
    return x;
}

void symmetric_gauss_seidel(const SpMat& A, const Vec& diag, const Vec& b, Vec& x) {
    const int n = static_cast<int>(A.rows());
    const int* outer = A.outerIndexPtr();
    const int* inner = A.innerIndexPtr();
    const double* val = A.valuePtr();
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int p = outer[i]; p < outer[i + 1]; ++p) s -= val[p] * x[inner[p]];
        x[i] += s / diag[i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int p = outer[i]; p < outer[i + 1]; ++p) s -= val[p] * x[inner[p]];
        x[i] += s / diag[i];
    }
}

}  // namespace tphom
