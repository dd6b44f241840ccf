#pragma once

// Independent reference computations shared by the unit and acceptance suites.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include <Eigen/Dense>

#include "tphom/effective.hpp"
#include "tphom/macro.hpp"
#include "tphom/reference_element.hpp"
#include "tphom/tensor.hpp"
#include "tphom/transient.hpp"

namespace oracle {

using tphom::Mat3;
using tphom::Mat6;
using tphom::Vec;
using tphom::Vec3;

// Layered medium with isotropic layers stacked along `axis`; raw Voigt entries.
inline Mat6 backus(double l1, double m1, double l2, double m2, double f1, int axis) {
    const double f2 = 1.0 - f1;
    auto avg = [&](auto g) { return f1 * g(l1, m1) + f2 * g(l2, m2); };
    const double c33 = 1.0 / avg([](double l, double m) { return 1.0 / (l + 2 * m); });
    const double r = avg([](double l, double m) { return l / (l + 2 * m); });
    const double c13 = r * c33;
    const double c11 = avg([](double l, double m) { return 4 * m * (l + m) / (l + 2 * m); }) + r * r * c33;
    const double c12 = avg([](double l, double m) { return 2 * m * l / (l + 2 * m); }) + r * r * c33;
    const double c44 = 1.0 / avg([](double, double m) { return 1.0 / m; });
    const double c66 = avg([](double, double m) { return m; });
    // Stack along z first, then relabel axes.
    double C[3][3][3][3] = {};
    auto set = [&](int i, int j, int k, int l, double v) {
        C[i][j][k][l] = C[j][i][k][l] = C[i][j][l][k] = C[j][i][l][k] = v;
        C[k][l][i][j] = C[l][k][i][j] = C[k][l][j][i] = C[l][k][j][i] = v;
    };
    set(0, 0, 0, 0, c11);
    set(1, 1, 1, 1, c11);
    set(2, 2, 2, 2, c33);
    set(0, 0, 1, 1, c12);
    set(0, 0, 2, 2, c13);
    set(1, 1, 2, 2, c13);
    set(1, 2, 1, 2, c44);
    set(0, 2, 0, 2, c44);
    set(0, 1, 0, 1, c66);
    // permutation sending z to `axis`
    int perm[3];
    perm[2] = axis;
    perm[0] = (axis + 1) % 3;
    perm[1] = (axis + 2) % 3;
    tphom::Tensor4 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) t.c[perm[i]][perm[j]][perm[k]][perm[l]] = C[i][j][k][l];
    return t.to_voigt();
}

// Monolithic backward-Euler step by dense LU of the full block matrix.
inline void dense_step(const tphom::TransientBlocks& b, double dt, const Vec& u0, const Vec& s0, const Vec& Fu,
                       const Vec& Fs, Vec& u, Vec& s) {
    const Eigen::Index nu = b.Kuu.rows(), ns = b.S.rows();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nu + ns, nu + ns);
    A.topLeftCorner(nu, nu) = Eigen::MatrixXd(b.Kuu);
    A.topRightCorner(nu, ns) = Eigen::MatrixXd(b.Kus);
    A.bottomLeftCorner(ns, nu) = Eigen::MatrixXd(b.Ksu);
    A.bottomRightCorner(ns, ns) = Eigen::MatrixXd(b.S) + dt * Eigen::MatrixXd(b.D);
    Vec rhs(nu + ns);
    rhs.head(nu) = Fu;
    rhs.tail(ns) = dt * Fs + b.Ksu * u0 + b.S * s0;
    Vec x = A.fullPivLu().solve(rhs);
    u = x.head(nu);
    s = x.tail(ns);
}

// A generic anisotropic coefficient set for the homogenized system.
// p2, th2 carry diagonal tensors so that cosine profiles satisfy the natural boundary condition.
inline tphom::EffectiveCoefficients generic_coefficients() {
    tphom::EffectiveCoefficients c;
    Mat6 A = tphom::Tensor4::isotropic(1.5, 1.0).to_voigt();
    A(0, 1) += 0.1;
    A(1, 0) += 0.1;
    A(3, 3) += 0.05;
    A(0, 5) += 0.05;
    A(5, 0) += 0.05;
    c.A_hom = c.A_energy = A;
    c.K[0] << 1.0, 0.2, 0.1, 0.2, 0.8, 0.05, 0.1, 0.05, 1.2;
    c.K[1] = Vec3(0.3, 0.4, 0.5).asDiagonal();
    c.L[0] << 0.9, 0.1, 0.0, 0.1, 1.1, 0.2, 0.0, 0.2, 0.7;
    c.L[1] = Vec3(0.6, 0.2, 0.4).asDiagonal();
    c.C[0] << 0.7, 0.05, 0.0, 0.05, 0.75, 0.02, 0.0, 0.02, 0.72;
    c.C[1] = Mat3::Identity() - c.C[0];
    c.beta = {0.6, 0.4};
    c.gamma = {0.3, 0.2};
    c.B[0] << 0.4, 0.05, 0.0, 0.02, 0.45, 0.01, 0.0, 0.03, 0.42;
    c.B[1] << 0.1, 0.0, 0.01, 0.0, 0.12, 0.0, 0.02, 0.0, 0.09;
    c.D[0] << 0.2, 0.01, 0.0, 0.0, 0.22, 0.02, 0.01, 0.0, 0.18;
    c.D[1] << 0.05, 0.0, 0.0, 0.01, 0.06, 0.0, 0.0, 0.0, 0.04;
    c.phi_star = {0.8, 0.3};
    c.alpha_star = {0.1, 0.05};
    c.c_star = {0.9, 0.4};
    c.zeta_star = 1.5;
    c.omega_star = 0.7;
    c.volume = {0.875, 0.125};
    return c;
}

// u = T(t) a S(x), p1 = T P1 S, p2 = T P2 Cc, th1 = T Q1 S, th2 = T Q2 Cc with
// S = sin(pi x) sin(pi y) sin(pi z), Cc = cos(pi x) cos(pi y) cos(pi z).
struct Manufactured {
    tphom::EffectiveCoefficients c;
    Vec3 a{1.0, -0.5, 0.75};
    double P1 = 1.0, P2 = 0.5, Q1 = 0.8, Q2 = -0.4;
    std::function<double(double)> T = [](double t) { return t; };
    std::function<double(double)> dT = [](double) { return 1.0; };

    static double S(const Vec3& x) {
        const double pi = std::numbers::pi;
        return std::sin(pi * x[0]) * std::sin(pi * x[1]) * std::sin(pi * x[2]);
    }
    static double Cc(const Vec3& x) {
        const double pi = std::numbers::pi;
        return std::cos(pi * x[0]) * std::cos(pi * x[1]) * std::cos(pi * x[2]);
    }
    // Gradient and Hessian of a product of per-axis factors f_d(pi x_d).
    static void derivatives(const Vec3& x, bool sine, Vec3& g, Mat3& H) {
        const double pi = std::numbers::pi;
        double f[3], df[3], ddf[3];
        for (int d = 0; d < 3; ++d) {
            double s = std::sin(pi * x[d]), co = std::cos(pi * x[d]);
            f[d] = sine ? s : co;
            df[d] = sine ? pi * co : -pi * s;
            ddf[d] = -pi * pi * f[d];
        }
        for (int i = 0; i < 3; ++i) {
            g[i] = 1.0;
            for (int d = 0; d < 3; ++d) g[i] *= (d == i ? df[d] : f[d]);
            for (int j = 0; j < 3; ++j) {
                double v = 1.0;
                for (int d = 0; d < 3; ++d) {
                    if (i == j) v *= (d == i ? ddf[d] : f[d]);
                    else v *= (d == i || d == j) ? df[d] : f[d];
                }
                H(i, j) = v;
            }
        }
    }

    Vec3 u(const Vec3& x, double t) const { return T(t) * S(x) * a; }
    double p(int m, const Vec3& x, double t) const { return m == 0 ? T(t) * P1 * S(x) : T(t) * P2 * Cc(x); }
    double th(int m, const Vec3& x, double t) const { return m == 0 ? T(t) * Q1 * S(x) : T(t) * Q2 * Cc(x); }

    tphom::MacroLoads loads() const {
        tphom::MacroLoads l;
        const Manufactured self = *this;
        const tphom::Tensor4 A = tphom::Tensor4::from_voigt(c.A_hom);
        l.f = [self, A](const Vec3& x, double t) {
            Vec3 gs, gc;
            Mat3 Hs, Hc;
            derivatives(x, true, gs, Hs);
            derivatives(x, false, gc, Hc);
            Vec3 f = Vec3::Zero();
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k)
                        for (int l = 0; l < 3; ++l) f[i] -= A.c[i][j][k][l] * self.a[k] * Hs(j, l);
            f *= self.T(t);
            f += self.T(t) * (self.c.B[0].transpose() * (self.P1 * gs) + self.c.B[1].transpose() * (self.P2 * gc) +
                              self.c.D[0].transpose() * (self.Q1 * gs) + self.c.D[1].transpose() * (self.Q2 * gc));
            return f;
        };
        for (int m = 0; m < 2; ++m) {
            l.g[m] = [self, m](const Vec3& x, double t) { return self.scalar_source(m, true, x, t); };
            l.h[m] = [self, m](const Vec3& x, double t) { return self.scalar_source(m, false, x, t); };
        }
        return l;
    }

    double scalar_source(int m, bool pressure, const Vec3& x, double t) const {
        Vec3 gs, gc;
        Mat3 Hs, Hc;
        derivatives(x, true, gs, Hs);
        derivatives(x, false, gc, Hc);
        // C_m : e(a S) = sum_kl C_kl a_k d_l S
        const double ce = a.dot(c.C[m] * gs);
        const double own = pressure ? (m == 0 ? P1 : P2) : (m == 0 ? Q1 : Q2);
        const double other_amp = pressure ? (m == 0 ? P2 : P1) : (m == 0 ? Q2 : Q1);
        const double cross = pressure ? (m == 0 ? Q1 : Q2) : (m == 0 ? P1 : P2);
        const double prof = m == 0 ? S(x) : Cc(x);
        const double prof_other = m == 0 ? Cc(x) : S(x);
        const Mat3& H = m == 0 ? Hs : Hc;
        const Mat3& K = pressure ? c.K[m] : c.L[m];
        const double store = pressure ? c.phi_star[m] : c.c_star[m];
        const double coup = pressure ? c.beta[m] : c.gamma[m];
        const double ex = pressure ? c.zeta_star : c.omega_star;
        double div = (K.array() * H.array()).sum();
        return dT(t) * (store * own * prof + c.alpha_star[m] * cross * prof + coup * ce) - T(t) * own * div +
               ex * T(t) * (own * prof - other_amp * prof_other);
    }
};

// L2 errors of (u, p1, p2, th1, th2) against the manufactured fields, 3x3x3 Gauss per macro cell.
inline std::array<double, 5> l2_errors(const tphom::BoxGrid& g, const tphom::MacroState& s, const Manufactured& mms) {
    using tphom::q1::kGauss3;
    using tphom::q1::kGauss3w;
    std::array<double, 5> e{};
    const double vol = g.h * g.h * g.h;
    for (int c = 0; c < g.num_cells(); ++c) {
        Vec3 x0 = g.cell_origin(c);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    Vec3 x = x0 + g.h * Vec3(kGauss3[i], kGauss3[j], kGauss3[k]);
                    double w = vol * kGauss3w[i] * kGauss3w[j] * kGauss3w[k];
                    e[0] += w * (tphom::interpolate_vector(g, s.u, x) - mms.u(x, s.t)).squaredNorm();
                    for (int m = 0; m < 2; ++m) {
                        e[1 + m] += w * std::pow(tphom::interpolate_scalar(g, s.p[m], x) - mms.p(m, x, s.t), 2);
                        e[3 + m] += w * std::pow(tphom::interpolate_scalar(g, s.th[m], x) - mms.th(m, x, s.t), 2);
                    }
                }
    }
    for (double& v : e) v = std::sqrt(v);
    return e;
}

}  // namespace oracle
