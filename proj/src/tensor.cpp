#include "tphom/tensor.hpp"

#include <cmath>

namespace tphom {

Tensor4 Tensor4::isotropic(double lambda, double mu) {
    Tensor4 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    t.c[i][j][k][l] = lambda * (i == j) * (k == l) + mu * ((i == k) * (j == l) + (i == l) * (j == k));
    return t;
}

Tensor4 Tensor4::from_voigt(const Mat6& v) {
    Tensor4 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) t.c[i][j][k][l] = v(voigt_index(i, j), voigt_index(k, l));
    return t;
}

Mat6 Tensor4::to_voigt() const {
    Mat6 v;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) v(a, b) = c[kVoigtPairs[a][0]][kVoigtPairs[a][1]][kVoigtPairs[b][0]][kVoigtPairs[b][1]];
    return v;
}

Mat3 Tensor4::contract(const Mat3& e) const {
    Mat3 s = Mat3::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) acc += c[i][j][k][l] * e(k, l);
            s(i, j) = acc;
        }
    return s;
}

double Tensor4::max_abs() const {
    double m = 0.0;
    for (int i = 0; i < 81; ++i) m = std::max(m, std::abs((&c[0][0][0][0])[i]));
    return m;
}

Mat3 unit_strain(int k, int h) {
    Mat3 e = Mat3::Zero();
    e(k, h) += 0.5;
    e(h, k) += 0.5;
    return e;
}

static Mat6 mandel(const Mat6& v) {
    Mat6 m = v;
    const double s = std::sqrt(2.0);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) m(a, b) *= (a >= 3 ? s : 1.0) * (b >= 3 ? s : 1.0);
    return 0.5 * (m + m.transpose());
}

double min_mandel_eigenvalue(const Mat6& voigt) {
    Eigen::SelfAdjointEigenSolver<Mat6> es(mandel(voigt), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double min_mandel_eigenvalue_of_difference(const Mat6& a, const Mat6& b) {
    return min_mandel_eigenvalue(a - b);
}

}  // namespace tphom
