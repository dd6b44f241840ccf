#pragma once

#include <array>

namespace tphom {

// Trilinear hexahedron on the unit reference cube [0,1]^3.
// Local node a = ax + 2*ay + 4*az with corner (ax, ay, az).
namespace q1 {

inline int corner(int a, int d) { return (a >> d) & 1; }

double shape(int a, const double* xi);
void shape_grad(int a, const double* xi, double* g);

// 2-point Gauss rule per axis on [0,1].
inline constexpr double kGauss2[2] = {0.21132486540518711775, 0.78867513459481288225};

// 3-point Gauss rule per axis on [0,1].
inline constexpr double kGauss3[3] = {0.11270166537925831148, 0.5, 0.88729833462074168852};
inline constexpr double kGauss3w[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

struct Reference {
    double mass[8][8];             // int N_a N_b
    double stiff[8][8];            // int grad N_a . grad N_b
    double grad_int[8][3];         // int d_j N_a
    double couple[8][8][3];        // int N_a d_j N_b
    double ss[8][8][3][3];         // int d_j N_a d_h N_b
    double qp[8][3];               // 2x2x2 quadrature points
    double qshape[8][8];           // N_a at qp
    double qgrad[8][8][3];         // grad N_a at qp
};

const Reference& reference();

// Face-local mass matrix on a unit square for the 4 nodes of a face; used for interface terms.
// Face nodes are ordered by the two tangential axes: b = t0 + 2*t1.
struct FaceRule {
    int npts;
    double pts[9][2];
    double w[9];
    double shape[9][4];
};
const FaceRule& face_rule();

}  // namespace q1
}  // namespace tphom
