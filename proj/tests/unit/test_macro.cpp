#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "tphom/errors.hpp"
#include "tphom/macro.hpp"

using namespace tphom;

namespace {

MacroOptions opts(int M, double dt, double t_end) {
    MacroOptions o;
    o.resolution = M;
    o.dt = dt;
    o.t_end = t_end;
    o.solver.tol = 1e-12;
    return o;
}

// Coefficients for which the coupling blocks are skew: B_m = beta_m C_m, D_m = gamma_m C_m.
EffectiveCoefficients dissipative() {
    EffectiveCoefficients c = oracle::generic_coefficients();
    for (int m = 0; m < 2; ++m) {
        c.B[m] = c.beta[m] * c.C[m];
        c.D[m] = c.gamma[m] * c.C[m];
    }
    return c;
}

MacroState random_state(const MacroSolver& s, unsigned seed) {
    MacroState st = s.zero_state();
    std::srand(seed);
    Vec u = Vec::Random(s.blocks().Kuu.rows()), p = Vec::Random(s.blocks().S.rows());
    s.unpack(u, p, st);
    return st;
}

}  // namespace

TEST(Macro, ZeroDataStaysZero) {
    MacroSolver s(oracle::generic_coefficients(), opts(4, 0.1, 0.3));
    auto r = s.run(zero_macro_loads());
    for (const auto& st : r.states) {
        EXPECT_EQ(st.u.cwiseAbs().maxCoeff(), 0.0);
        for (int m = 0; m < 2; ++m) {
            EXPECT_EQ(st.p[m].cwiseAbs().maxCoeff(), 0.0);
            EXPECT_EQ(st.th[m].cwiseAbs().maxCoeff(), 0.0);
        }
    }
}

TEST(Macro, StepMatchesDenseElimination) {
    oracle::Manufactured mms;
    mms.c = oracle::generic_coefficients();
    for (int dense_limit : {kDenseLimit, 0}) {
        MacroOptions o = opts(4, 0.05, 0.05);
        o.solver.dense_limit = dense_limit;
        MacroSolver s(mms.c, o);
        MacroState s0 = random_state(s, 7);
        MacroLoads l = mms.loads();
        MacroState s1 = s.step(s0, l);
        Vec u, p;
        oracle::dense_step(s.blocks(), 0.05, s.pack_u(s0), s.pack_s(s0), s.load_u(l, 0.05), s.load_s(l, 0.05), u, p);
        EXPECT_LT((s.pack_u(s1) - u).norm() / u.norm(), 1e-9) << "dense_limit " << dense_limit;
        EXPECT_LT((s.pack_s(s1) - p).norm() / p.norm(), 1e-9) << "dense_limit " << dense_limit;
    }
}

TEST(Macro, TemperatureDecouplesWithoutThermalCoupling) {
    EffectiveCoefficients c = oracle::generic_coefficients();
    c.gamma = {0, 0};
    c.D = {Mat3::Zero(), Mat3::Zero()};
    c.alpha_star = {0, 0};
    oracle::Manufactured mms;
    mms.c = c;
    MacroLoads l = mms.loads();
    const double dt = 0.05;
    MacroSolver s(c, opts(6, dt, 0.2));
    DualDiffusionSolver heat(6, dt, {c.c_star[0], c.c_star[1]}, {c.L[0], c.L[1]}, c.omega_star);
    auto r = s.run(l);
    std::array<Vec, 2> th = {Vec::Zero(s.grid().num_nodes()), Vec::Zero(s.grid().num_nodes())};
    for (size_t k = 1; k < r.states.size(); ++k) {
        th = heat.step(th, l.h, r.states[k].t);
        double scale = std::max(th[0].cwiseAbs().maxCoeff(), th[1].cwiseAbs().maxCoeff());
        for (int m = 0; m < 2; ++m) EXPECT_LT((r.states[k].th[m] - th[m]).cwiseAbs().maxCoeff(), 1e-9 * scale);
    }
}

TEST(Macro, EnergyDecaysWithSkewCoupling) {
    MacroSolver s(dissipative(), opts(4, 0.05, 0.05));
    MacroState cur = random_state(s, 3);
    auto energy = [&](const MacroState& st) {
        Vec u = s.pack_u(st), p = s.pack_s(st);
        return 0.5 * u.dot(s.blocks().Kuu * u) + 0.5 * p.dot(s.blocks().S * p);
    };
    double e = energy(cur);
    for (int n = 0; n < 5; ++n) {
        cur = s.step(cur, zero_macro_loads());
        double en = energy(cur);
        EXPECT_LT(en, e);
        e = en;
    }
}

TEST(Macro, PureDiffusionEnergyIdentityIsExact) {
    EffectiveCoefficients c = oracle::generic_coefficients();
    c.beta = c.gamma = {0, 0};
    for (int m = 0; m < 2; ++m) c.B[m] = c.D[m] = Mat3::Zero();
    c.alpha_star = {0, 0};
    oracle::Manufactured mms;
    mms.c = c;
    MacroSolver s(c, opts(4, 0.05, 0.25));
    auto r = s.run(mms.loads());
    EXPECT_LE(r.ledger.pressure_residual(), 1e-8);
    EXPECT_LE(r.ledger.thermal_residual(), 1e-8);
}

TEST(Macro, ManufacturedSolutionSecondOrderInSpace) {
    oracle::Manufactured mms;
    mms.c = oracle::generic_coefficients();
    std::array<double, 5> prev{};
    for (int M : {4, 8}) {
        MacroSolver s(mms.c, opts(M, 0.05, 0.1));
        auto r = s.run(mms.loads());
        auto e = oracle::l2_errors(s.grid(), r.states.back(), mms);
        if (M == 8)
            for (int f = 0; f < 5; ++f) EXPECT_GE(std::log2(prev[f] / e[f]), 1.8) << "field " << f;
        prev = e;
    }
}

TEST(Macro, InterpolationIsExactForTrilinearFields) {
    BoxGrid g(4);
    Vec f(g.num_nodes());
    auto lin = [](const Vec3& x) { return 1.0 + 2.0 * x[0] - x[1] + 0.5 * x[2] + x[0] * x[1] * x[2]; };
    for (int v = 0; v < g.num_nodes(); ++v) {
        auto ijk = g.node_ijk(v);
        f[v] = lin(Vec3(ijk[0] * g.h, ijk[1] * g.h, ijk[2] * g.h));
    }
    Vec3 x(0.33, 0.71, 0.05);
    EXPECT_NEAR(interpolate_scalar(g, f, x), lin(x), 1e-14);
    Vec3 grad = interpolate_scalar_gradient(g, f, x);
    EXPECT_NEAR(grad[0], 2.0 + x[1] * x[2], 1e-13);
}

TEST(Macro, WellPosednessGuard) {
    EffectiveCoefficients c = oracle::generic_coefficients();
    c.alpha_star[1] = 1.0;
    EXPECT_THROW(validate_macro_coefficients(c), WellPosednessError);
    EXPECT_THROW(MacroSolver(c, opts(4, 0.1, 0.1)), WellPosednessError);
}

TEST(Macro, LedgerTermsVanishForZeroSources) {
    MacroSolver s(oracle::generic_coefficients(), opts(4, 0.1, 0.2));
    auto r = s.run(zero_macro_loads());
    EXPECT_EQ(r.ledger.pressure_residual(), 0.0);
    for (const auto& row : r.ledger.rows) EXPECT_EQ(row.storage, 0.0);
}
