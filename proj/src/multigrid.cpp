#include "tphom/multigrid.hpp"

#include "tphom/errors.hpp"

namespace tphom {

SpMat trilinear_prolongation(int Nf, int ncomp) {
    const int Nc = Nf / 2;
    const int mf = Nf - 1, mc = Nc - 1;
    std::vector<Eigen::Triplet<double>> t;
    for (int k = 1; k < Nf; ++k)
        for (int j = 1; j < Nf; ++j)
            for (int i = 1; i < Nf; ++i) {
                int fi = (i - 1) + mf * ((j - 1) + mf * (k - 1));
                int ci[3][2], nci[3];
                double cw[3][2];
                int fijk[3] = {i, j, k};
                for (int d = 0; d < 3; ++d) {
                    int x = fijk[d];
                    if (x % 2 == 0) {
                        ci[d][0] = x / 2;
                        cw[d][0] = 1.0;
                        nci[d] = 1;
                    } else {
                        ci[d][0] = (x - 1) / 2;
                        ci[d][1] = (x + 1) / 2;
                        cw[d][0] = cw[d][1] = 0.5;
                        nci[d] = 2;
                    }
                }
                for (int c = 0; c < nci[2]; ++c)
                    for (int b = 0; b < nci[1]; ++b)
                        for (int a = 0; a < nci[0]; ++a) {
                            int x = ci[0][a], y = ci[1][b], z = ci[2][c];
                            if (x < 1 || y < 1 || z < 1 || x > mc || y > mc || z > mc) continue;
                            int cidx = (x - 1) + mc * ((y - 1) + mc * (z - 1));
                            double w = cw[0][a] * cw[1][b] * cw[2][c];
                            for (int comp = 0; comp < ncomp; ++comp)
                                t.emplace_back(ncomp * fi + comp, ncomp * cidx + comp, w);
                        }
            }
    SpMat P(static_cast<Eigen::Index>(ncomp) * mf * mf * mf, static_cast<Eigen::Index>(ncomp) * mc * mc * mc);
    P.setFromTriplets(t.begin(), t.end());
    return P;
}

GeometricMultigrid::GeometricMultigrid(const SpMat& A, int N, int ncomp, int coarse_limit, int smoothing)
    : ncomp_(ncomp), smoothing_(smoothing) {
    const Eigen::Index expected = static_cast<Eigen::Index>(ncomp) * (N - 1) * (N - 1) * (N - 1);
    if (A.rows() != expected) throw AssemblyError("multigrid operator does not match the lattice size");
    levels_.push_back({A, A.diagonal(), SpMat(), N});
    while (true) {
        Level& f = levels_.back();
        if (f.A.rows() <= coarse_limit || f.N % 2 != 0 || f.N / 2 < 2) break;
        SpMat P = trilinear_prolongation(f.N, ncomp);
        SpMat AP = f.A * P;
        SpMat Ac = SpMat(P.transpose()) * AP;
        f.P = P;
        int Nc = f.N / 2;
        levels_.push_back({Ac, Ac.diagonal(), SpMat(), Nc});
    }
    coarse_.compute(Eigen::MatrixXd(levels_.back().A));
}

void GeometricMultigrid::cycle(int l, const Vec& b, Vec& x) {
    Level& L = levels_[l];
    if (l + 1 == static_cast<int>(levels_.size())) {
        x = coarse_.solve(b);
        return;
    }
    for (int s = 0; s < smoothing_; ++s) symmetric_gauss_seidel(L.A, L.diag, b, x);
    Vec r = b - L.A * x;
    Vec rc = L.P.transpose() * r;
    Vec xc = Vec::Zero(rc.size());
    cycle(l + 1, rc, xc);
    x += L.P * xc;
    for (int s = 0; s < smoothing_; ++s) symmetric_gauss_seidel(L.A, L.diag, b, x);
}

void GeometricMultigrid::apply(const Vec& r, Vec& z) {
    z = Vec::Zero(r.size());
    cycle(0, r, z);
}

IncompleteCholeskyPreconditioner::IncompleteCholeskyPreconditioner(const SpMat& A) {
    Eigen::SparseMatrix<double> Ac = A;
    ic_.compute(Ac);
    if (ic_.info() != Eigen::Success) throw SolverError("incomplete Cholesky factorization failed", 0.0, 0);
}

void IncompleteCholeskyPreconditioner::apply(const Vec& r, Vec& z) { z = ic_.solve(r); }

}  // namespace tphom
