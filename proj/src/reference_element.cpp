#include "tphom/reference_element.hpp"

namespace tphom::q1 {

double shape(int a, const double* xi) {
    double v = 1.0;
    for (int d = 0; d < 3; ++d) v *= corner(a, d) ? xi[d] : 1.0 - xi[d];
    return v;
}

void shape_grad(int a, const double* xi, double* g) {
    double f[3], df[3];
    for (int d = 0; d < 3; ++d) {
        f[d] = corner(a, d) ? xi[d] : 1.0 - xi[d];
        df[d] = corner(a, d) ? 1.0 : -1.0;
    }
    g[0] = df[0] * f[1] * f[2];
    g[1] = f[0] * df[1] * f[2];
    g[2] = f[0] * f[1] * df[2];
}

static Reference build_reference() {
    Reference r{};
    int q = 0;
    for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 2; ++i, ++q) {
                r.qp[q][0] = kGauss2[i];
                r.qp[q][1] = kGauss2[j];
                r.qp[q][2] = kGauss2[k];
                for (int a = 0; a < 8; ++a) {
                    r.qshape[q][a] = shape(a, r.qp[q]);
                    shape_grad(a, r.qp[q], r.qgrad[q][a]);
                }
            }
    const double w = 1.0 / 8.0;
    for (int q = 0; q < 8; ++q)
        for (int a = 0; a < 8; ++a) {
            for (int d = 0; d < 3; ++d) r.grad_int[a][d] += w * r.qgrad[q][a][d];
            for (int b = 0; b < 8; ++b) {
                r.mass[a][b] += w * r.qshape[q][a] * r.qshape[q][b];
                for (int d = 0; d < 3; ++d) {
                    r.stiff[a][b] += w * r.qgrad[q][a][d] * r.qgrad[q][b][d];
                    r.couple[a][b][d] += w * r.qshape[q][a] * r.qgrad[q][b][d];
                    for (int e = 0; e < 3; ++e) r.ss[a][b][d][e] += w * r.qgrad[q][a][d] * r.qgrad[q][b][e];
                }
            }
        }
    return r;
}

const Reference& reference() {
    static const Reference r = build_reference();
    return r;
}

static FaceRule build_face_rule() {
    FaceRule f{};
    f.npts = 9;
    int q = 0;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i, ++q) {
            f.pts[q][0] = kGauss3[i];
            f.pts[q][1] = kGauss3[j];
            f.w[q] = kGauss3w[i] * kGauss3w[j];
            for (int b = 0; b < 4; ++b) {
                double s = (b & 1) ? f.pts[q][0] : 1.0 - f.pts[q][0];
                s *= (b & 2) ? f.pts[q][1] : 1.0 - f.pts[q][1];
                f.shape[q][b] = s;
            }
        }
    return f;
}

const FaceRule& face_rule() {
    static const FaceRule f = build_face_rule();
    return f;
}

}  // namespace tphom::q1
