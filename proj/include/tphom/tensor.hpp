#pragma once

#include <Eigen/Dense>
#include <array>

namespace tphom {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// Voigt order (11,22,33,23,13,12), zero-based.
inline constexpr std::array<std::array<int, 2>, 6> kVoigtPairs{{{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}}};

inline int voigt_index(int i, int j) {
    if (i == j) return i;
    return 6 - i - j;  // (1,2)->3, (0,2)->4, (0,1)->5
}

struct Tensor4 {
    double c[3][3][3][3] = {};

    double& operator()(int i, int j, int k, int l) { return c[i][j][k][l]; }
    double operator()(int i, int j, int k, int l) const { return c[i][j][k][l]; }

    static Tensor4 isotropic(double lambda, double mu);
    static Tensor4 from_voigt(const Mat6& v);
    Mat6 to_voigt() const;

    // sigma_ij = c_ijkl e_kl
    Mat3 contract(const Mat3& e) const;
    double max_abs() const;
};

// Unit symmetric strain E^{kh} = sym(e_k (x) e_h).
Mat3 unit_strain(int k, int h);

// Smallest eigenvalue of the Mandel form (shear rows/columns weighted by sqrt 2, factor 2 on
// the shear-shear block), i.e. positive definiteness on symmetric strains.
double min_mandel_eigenvalue(const Mat6& voigt);

// Quadratic-form comparison helper: smallest eigenvalue of the symmetric part of a - b in Mandel form.
double min_mandel_eigenvalue_of_difference(const Mat6& a, const Mat6& b);

}  // namespace tphom
