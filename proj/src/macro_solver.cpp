#include "tphom/macro.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <cmath>

#include "tphom/errors.hpp"
#include "tphom/log.hpp"

namespace tphom {

std::array<int, 8> BoxGrid::cell_nodes(int c) const {
    auto [i, j, k] = cell_ijk(c);
    std::array<int, 8> v;
    for (int a = 0; a < 8; ++a) v[a] = node(i + (a & 1), j + ((a >> 1) & 1), k + ((a >> 2) & 1));
    return v;
}

Vec3 BoxGrid::cell_origin(int c) const {
    auto ijk = cell_ijk(c);
    return Vec3(ijk[0] * h, ijk[1] * h, ijk[2] * h);
}

bool BoxGrid::on_boundary(int v) const {
    auto ijk = node_ijk(v);
    for (int d = 0; d < 3; ++d)
        if (ijk[d] == 0 || ijk[d] == M) return true;
    return false;
}

int BoxGrid::interior_index(int v) const {
    auto [i, j, k] = node_ijk(v);
    if (i == 0 || j == 0 || k == 0 || i == M || j == M || k == M) return -1;
    return (i - 1) + (M - 1) * ((j - 1) + (M - 1) * (k - 1));
}

void validate_macro_coefficients(const EffectiveCoefficients& c) {
    for (int m = 0; m < 2; ++m)
        if (!(c.phi_star[m] * c.c_star[m] > c.alpha_star[m] * c.alpha_star[m]))
            throw WellPosednessError("phase " + std::to_string(m + 1) +
                                     ": phi* c* must exceed (alpha*)^2 for a positive storage form");
}

namespace {

template <int R, int C>
void put(double* ke, int width, int r0, int c0, const Eigen::Matrix<double, R, C>& m) {
    for (int a = 0; a < R; ++a)
        for (int b = 0; b < C; ++b) ke[(r0 + a) * width + c0 + b] += m(a, b);
}

}  // namespace

MacroSolver::MacroSolver(const EffectiveCoefficients& coeffs, const MacroOptions& opts)
    : c_(coeffs), opts_(opts), grid_(opts.resolution) {
    if (opts.resolution < 2) throw ConfigError("macro resolution must be at least 2");
    if (!(opts.dt > 0)) throw ConfigError("dt must be positive");
    validate_macro_coefficients(coeffs);
    const int nn = grid_.num_nodes();

    u_dof_.assign(nn, -1);
    for (int v = 0; v < nn; ++v) u_dof_[v] = grid_.interior_index(v);
    const int nu = 3 * (grid_.M - 1) * (grid_.M - 1) * (grid_.M - 1);

    int next = 0;
    for (int f = 0; f < 4; ++f) {
        bool dirichlet = (f == 0 || f == 2) && !opts.natural_bc;
        field_dof_[f].assign(nn, -1);
        for (int v = 0; v < nn; ++v)
            if (!dirichlet || !grid_.on_boundary(v)) field_dof_[f][v] = next++;
    }
    const int ns = next;

    utab_.width = 24;
    utab_.ndofs = nu;
    stab_.width = 32;
    stab_.ndofs = ns;
    utab_.dofs.resize(static_cast<size_t>(grid_.num_cells()) * 24);
    stab_.dofs.resize(static_cast<size_t>(grid_.num_cells()) * 32);
    for (int e = 0; e < grid_.num_cells(); ++e) {
        auto nodes = grid_.cell_nodes(e);
        for (int a = 0; a < 8; ++a) {
            int ui = u_dof_[nodes[a]];
            for (int d = 0; d < 3; ++d) utab_.dofs[static_cast<size_t>(e) * 24 + 3 * a + d] = ui < 0 ? -1 : 3 * ui + d;
            for (int f = 0; f < 4; ++f) stab_.dofs[static_cast<size_t>(e) * 32 + 8 * f + a] = field_dof_[f][nodes[a]];
        }
    }

    const double h = grid_.h;
    const Mat8 Me = local_mass(h);
    const Tensor4 A = Tensor4::from_voigt(c_.A_hom);
    const Mat24 Ke = local_elastic(h, A);

    blocks_.Kuu = assemble(utab_, utab_, [&](int, double* ke) {
        Eigen::Map<Eigen::Matrix<double, 24, 24, Eigen::RowMajor>>{ke} = Ke;
        return true;
    });

    auto scalar_block = [&](auto fill) {
        return assemble(stab_, stab_, [&](int, double* ke) {
            fill(ke);
            return true;
        });
    };
    Sphi_ = scalar_block([&](double* ke) {
        put(ke, 32, 0, 0, Mat8(c_.phi_star[0] * Me));
        put(ke, 32, 8, 8, Mat8(c_.phi_star[1] * Me));
    });
    Salpha_ = scalar_block([&](double* ke) {
        for (int m = 0; m < 2; ++m) {
            put(ke, 32, 8 * m, 8 * (m + 2), Mat8(c_.alpha_star[m] * Me));
            put(ke, 32, 8 * (m + 2), 8 * m, Mat8(c_.alpha_star[m] * Me));
        }
    });
    Sc_ = scalar_block([&](double* ke) {
        put(ke, 32, 16, 16, Mat8(c_.c_star[0] * Me));
        put(ke, 32, 24, 24, Mat8(c_.c_star[1] * Me));
    });
    Kp_ = scalar_block([&](double* ke) {
        put(ke, 32, 0, 0, local_scalar_stiffness(h, c_.K[0]));
        put(ke, 32, 8, 8, local_scalar_stiffness(h, c_.K[1]));
    });
    Kth_ = scalar_block([&](double* ke) {
        put(ke, 32, 16, 16, local_scalar_stiffness(h, c_.L[0]));
        put(ke, 32, 24, 24, local_scalar_stiffness(h, c_.L[1]));
    });
    auto exchange = [&](double* ke, int f0, double coef) {
        Mat8 X = coef * Me;
        put(ke, 32, 8 * f0, 8 * f0, X);
        put(ke, 32, 8 * (f0 + 1), 8 * (f0 + 1), X);
        put(ke, 32, 8 * f0, 8 * (f0 + 1), Mat8(-X));
        put(ke, 32, 8 * (f0 + 1), 8 * f0, Mat8(-X));
    };
    Xp_ = scalar_block([&](double* ke) { exchange(ke, 0, c_.zeta_star); });
    Xth_ = scalar_block([&](double* ke) { exchange(ke, 2, c_.omega_star); });

    std::array<Mat8x24, 2> Cb, Cg;
    std::array<Mat24x8, 4> G;
    for (int m = 0; m < 2; ++m) {
        Cb[m] = local_strain_coupling(h, c_.beta[m] * c_.C[m]);
        Cg[m] = local_strain_coupling(h, c_.gamma[m] * c_.C[m]);
        G[m] = local_gradient_coupling(h, c_.B[m].transpose());
        G[m + 2] = local_gradient_coupling(h, c_.D[m].transpose());
    }
    Ksu_beta_ = assemble(stab_, utab_, [&](int, double* ke) {
        put(ke, 24, 0, 0, Cb[0]);
        put(ke, 24, 8, 0, Cb[1]);
        return true;
    });
    Ksu_gamma_ = assemble(stab_, utab_, [&](int, double* ke) {
        put(ke, 24, 16, 0, Cg[0]);
        put(ke, 24, 24, 0, Cg[1]);
        return true;
    });
    blocks_.Kus = assemble(utab_, stab_, [&](int, double* ke) {
        for (int f = 0; f < 4; ++f) put(ke, 32, 0, 8 * f, G[f]);
        return true;
    });
    blocks_.Ksu = Ksu_beta_ + Ksu_gamma_;
    blocks_.S = Sphi_ + Salpha_ + Sc_;
    blocks_.D = Kp_ + Kth_ + Xp_ + Xth_;
    blocks_.grid_cells = grid_.M;
    stepper_ = std::make_unique<TransientStepper>(blocks_, opts.dt, opts.solver);
    log::debug("macro system: " + std::to_string(nu) + " displacement + " + std::to_string(ns) + " scalar unknowns");
}

Vec MacroSolver::field_mask(int f) const {
    Vec m = Vec::Zero(blocks_.S.rows());
    for (int d : field_dof_[f])
        if (d >= 0) m[d] = 1.0;
    return m;
}

MacroState MacroSolver::zero_state() const {
    MacroState s;
    const int nn = grid_.num_nodes();
    s.u = Vec::Zero(3 * nn);
    for (int m = 0; m < 2; ++m) s.p[m] = s.th[m] = Vec::Zero(nn);
    return s;
}

Vec MacroSolver::pack_u(const MacroState& s) const {
    Vec x = Vec::Zero(blocks_.Kuu.rows());
    for (int v = 0; v < grid_.num_nodes(); ++v)
        if (u_dof_[v] >= 0)
            for (int d = 0; d < 3; ++d) x[3 * u_dof_[v] + d] = s.u[3 * v + d];
    return x;
}

Vec MacroSolver::pack_s(const MacroState& s) const {
    Vec x = Vec::Zero(blocks_.S.rows());
    const Vec* f[4] = {&s.p[0], &s.p[1], &s.th[0], &s.th[1]};
    for (int k = 0; k < 4; ++k)
        for (int v = 0; v < grid_.num_nodes(); ++v)
            if (field_dof_[k][v] >= 0) x[field_dof_[k][v]] = (*f[k])[v];
    return x;
}

void MacroSolver::unpack(const Vec& u, const Vec& s, MacroState& out) const {
    const int nn = grid_.num_nodes();
    out.u = Vec::Zero(3 * nn);
    for (int v = 0; v < nn; ++v)
        if (u_dof_[v] >= 0)
            for (int d = 0; d < 3; ++d) out.u[3 * v + d] = u[3 * u_dof_[v] + d];
    Vec* f[4] = {&out.p[0], &out.p[1], &out.th[0], &out.th[1]};
    for (int k = 0; k < 4; ++k) {
        *f[k] = Vec::Zero(nn);
        for (int v = 0; v < nn; ++v)
            if (field_dof_[k][v] >= 0) (*f[k])[v] = s[field_dof_[k][v]];
    }
}

Vec MacroSolver::load_u(const MacroLoads& l, double t) const {
    if (!l.f) return Vec::Zero(blocks_.Kuu.rows());
    return assemble_vector(utab_, [&](int e, double* fe) {
        local_vector_load(grid_.h, grid_.cell_origin(e), [&](const Vec3& x) { return l.f(x, t); }, fe);
        return true;
    });
}

Vec MacroSolver::load_s(const MacroLoads& l, double t) const {
    const ScalarField* f[4] = {&l.g[0], &l.g[1], &l.h[0], &l.h[1]};
    bool any = false;
    for (auto* p : f) any = any || static_cast<bool>(*p);
    if (!any) return Vec::Zero(blocks_.S.rows());
    return assemble_vector(stab_, [&](int e, double* fe) {
        Vec3 x0 = grid_.cell_origin(e);
        for (int k = 0; k < 4; ++k)
            if (*f[k]) local_scalar_load(grid_.h, x0, [&](const Vec3& x) { return (*f[k])(x, t); }, fe + 8 * k);
        return true;
    });
}

MacroState MacroSolver::initial_state(const MacroLoads& loads) {
    MacroState s = zero_state();
    if (opts_.elastostatic_initial) {
        Vec u = stepper_->elastostatic(load_u(loads, 0.0), pack_s(s));
        unpack(u, pack_s(s), s);
    }
    s.t = 0.0;
    return s;
}

MacroState MacroSolver::step(const MacroState& prev, const MacroLoads& loads) {
    const double t = prev.t + opts_.dt;
    Vec u, s;
    stepper_->step(pack_u(prev), pack_s(prev), load_u(loads, t), load_s(loads, t), u, s);
    MacroState out;
    unpack(u, s, out);
    out.t = t;
    return out;
}

LedgerRow MacroSolver::ledger_row(const MacroState& cur, const MacroState* prev, const Vec& Fs) const {
    LedgerRow r;
    r.t = cur.t;
    Vec u = pack_u(cur), s = pack_s(cur);
    r.elastic = 0.5 * u.dot(blocks_.Kuu * u);
    r.storage = 0.5 * s.dot(blocks_.S * s);
    Vec mp = field_mask(0) + field_mask(1);
    Vec mt = field_mask(2) + field_mask(3);
    Vec p = s.cwiseProduct(mp), th = s.cwiseProduct(mt);
    r.p_storage = 0.5 * p.dot(Sphi_ * p);
    r.th_storage = 0.5 * th.dot(Sc_ * th);
    if (!prev) return r;
    const double dt = cur.t - prev->t;
    Vec u0 = pack_u(*prev), s0 = pack_s(*prev);
    Vec p0 = s0.cwiseProduct(mp), th0 = s0.cwiseProduct(mt);
    Vec dp = p - p0, dth = th - th0, du = u - u0;
    r.p_numerical = 0.5 * dp.dot(Sphi_ * dp);
    r.th_numerical = 0.5 * dth.dot(Sc_ * dth);
    Vec cp = Ksu_beta_ * du + Salpha_ * dth;
    Vec ct = Ksu_gamma_ * du + Salpha_ * dp;
    r.p_coupling = 0.5 * (p + p0).dot(cp.cwiseProduct(mp));
    r.th_coupling = 0.5 * (th + th0).dot(ct.cwiseProduct(mt));
    r.p_diffusion = dt * p.dot(Kp_ * p);
    r.p_exchange = dt * p.dot(Xp_ * p);
    r.th_diffusion = dt * th.dot(Kth_ * th);
    r.th_exchange = dt * th.dot(Xth_ * th);
    r.p_source = dt * Fs.cwiseProduct(mp).dot(p);
    r.th_source = dt * Fs.cwiseProduct(mt).dot(th);
    r.diffusion = r.p_diffusion + r.th_diffusion;
    r.exchange = r.p_exchange + r.th_exchange;
    return r;
}

MacroSolver::Result MacroSolver::run(const MacroLoads& loads, const std::function<void(const MacroState&)>& on_output) {
    Result res;
    MacroState cur = initial_state(loads);
    res.ledger.rows.push_back(ledger_row(cur, nullptr, Vec()));
    res.states.push_back(cur);
    if (on_output) on_output(cur);
    const int nsteps = static_cast<int>(std::llround(opts_.t_end / opts_.dt));
    if (std::abs(nsteps * opts_.dt - opts_.t_end) > 1e-9 * std::max(1.0, opts_.t_end))
        log::warn("t_end is not a multiple of dt; running " + std::to_string(nsteps) + " steps");
    for (int n = 1; n <= nsteps; ++n) {
        MacroState next = step(cur, loads);
        res.stats.push_back(stepper_->last_stats());
        res.ledger.rows.push_back(ledger_row(next, &cur, load_s(loads, next.t)));
        cur = std::move(next);
        if (n % std::max(1, opts_.output_every) == 0 || n == nsteps) {
            res.states.push_back(cur);
            if (on_output) on_output(cur);
        }
    }
    return res;
}

namespace {

double identity_residual(const std::vector<LedgerRow>& rows, bool pressure) {
    if (rows.empty()) return 0.0;
    double storage0 = pressure ? rows.front().p_storage : rows.front().th_storage;
    double storageN = pressure ? rows.back().p_storage : rows.back().th_storage;
    double num = 0, coup = 0, diss = 0, src = 0;
    for (size_t n = 1; n < rows.size(); ++n) {
        const auto& r = rows[n];
        num += pressure ? r.p_numerical : r.th_numerical;
        coup += pressure ? r.p_coupling : r.th_coupling;
        diss += pressure ? r.p_diffusion + r.p_exchange : r.th_diffusion + r.th_exchange;
        src += pressure ? r.p_source : r.th_source;
    }
    double res = (storageN - storage0) + num + coup + diss - src;
    double scale = diss + std::abs(src) + std::abs(storageN) + num;
    if (scale == 0.0) return 0.0;
    return std::abs(res) / scale;
}

}  // namespace

double EnergyLedger::pressure_residual() const { return identity_residual(rows, true); }
double EnergyLedger::thermal_residual() const { return identity_residual(rows, false); }

DualDiffusionSolver::DualDiffusionSolver(int M, double dt, std::array<double, 2> storage, std::array<Mat3, 2> K,
                                         double exchange, bool natural, double tol)
    : grid_(M), dt_(dt), tol_(tol) {
    const int nn = grid_.num_nodes();
    dof1_.assign(nn, -1);
    dof2_.assign(nn, -1);
    for (int v = 0; v < nn; ++v)
        if (natural || !grid_.on_boundary(v)) dof1_[v] = n1_++;
    for (int v = 0; v < nn; ++v) dof2_[v] = n1_ + n2_++;
    const Mat8 Me = local_mass(grid_.h);
    std::array<Mat8, 2> Ke = {local_scalar_stiffness(grid_.h, K[0]), local_scalar_stiffness(grid_.h, K[1])};
    std::vector<Eigen::Triplet<double>> ts, ta;
    for (int e = 0; e < grid_.num_cells(); ++e) {
        auto nodes = grid_.cell_nodes(e);
        for (int a = 0; a < 8; ++a)
            for (int b = 0; b < 8; ++b) {
                int r[2] = {dof1_[nodes[a]], dof2_[nodes[a]]};
                int c[2] = {dof1_[nodes[b]], dof2_[nodes[b]]};
                for (int m = 0; m < 2; ++m) {
                    if (r[m] < 0 || c[m] < 0) continue;
                    ts.emplace_back(r[m], c[m], storage[m] * Me(a, b));
                    ta.emplace_back(r[m], c[m], dt * (Ke[m](a, b) + exchange * Me(a, b)));
                }
                for (int m = 0; m < 2; ++m) {
                    int o = 1 - m;
                    if (r[m] < 0 || c[o] < 0) continue;
                    ta.emplace_back(r[m], c[o], -dt * exchange * Me(a, b));
                }
            }
    }
    S_.resize(n1_ + n2_, n1_ + n2_);
    A_.resize(n1_ + n2_, n1_ + n2_);
    S_.setFromTriplets(ts.begin(), ts.end());
    A_.setFromTriplets(ta.begin(), ta.end());
    A_ += S_;
}

std::array<Vec, 2> DualDiffusionSolver::step(const std::array<Vec, 2>& prev, const std::array<ScalarField, 2>& loads,
                                             double t) const {
    const int n = n1_ + n2_;
    Vec x0 = Vec::Zero(n), F = Vec::Zero(n);
    for (int v = 0; v < grid_.num_nodes(); ++v) {
        if (dof1_[v] >= 0) x0[dof1_[v]] = prev[0][v];
        x0[dof2_[v]] = prev[1][v];
    }
    for (int e = 0; e < grid_.num_cells(); ++e) {
        auto nodes = grid_.cell_nodes(e);
        for (int m = 0; m < 2; ++m) {
            if (!loads[m]) continue;
            double fe[8] = {0};
            local_scalar_load(grid_.h, grid_.cell_origin(e), [&](const Vec3& x) { return loads[m](x, t); }, fe);
            for (int a = 0; a < 8; ++a) {
                int d = m == 0 ? dof1_[nodes[a]] : dof2_[nodes[a]];
                if (d >= 0) F[d] += fe[a];
            }
        }
    }
    Vec rhs = S_ * x0 + dt_ * F;
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::IncompleteCholesky<double>>
        cg;
    cg.setTolerance(tol_);
    cg.setMaxIterations(10000);
    cg.compute(A_);
    Vec x = cg.solveWithGuess(rhs, x0);
    if (cg.info() != Eigen::Success) throw SolverError("dual diffusion solve did not converge", cg.error(), (int)cg.iterations());
    std::array<Vec, 2> out = {Vec::Zero(grid_.num_nodes()), Vec::Zero(grid_.num_nodes())};
    for (int v = 0; v < grid_.num_nodes(); ++v) {
        if (dof1_[v] >= 0) out[0][v] = x[dof1_[v]];
        out[1][v] = x[dof2_[v]];
    }
    return out;
}

namespace {

int locate(const BoxGrid& g, const Vec3& x, double* xi) {
    int ijk[3];
    for (int d = 0; d < 3; ++d) {
        double s = x[d] * g.M;
        int i = static_cast<int>(std::floor(s));
        i = std::clamp(i, 0, g.M - 1);
        ijk[d] = i;
        xi[d] = s - i;
    }
    return ijk[0] + g.M * (ijk[1] + g.M * ijk[2]);
}

}  // namespace

double interpolate_scalar(const BoxGrid& g, const Vec& f, const Vec3& x) {
    double xi[3];
    auto nodes = g.cell_nodes(locate(g, x, xi));
    double v = 0.0;
    for (int a = 0; a < 8; ++a) v += f[nodes[a]] * q1::shape(a, xi);
    return v;
}

Vec3 interpolate_vector(const BoxGrid& g, const Vec& u, const Vec3& x) {
    double xi[3];
    auto nodes = g.cell_nodes(locate(g, x, xi));
    Vec3 v = Vec3::Zero();
    for (int a = 0; a < 8; ++a) {
        double s = q1::shape(a, xi);
        for (int d = 0; d < 3; ++d) v[d] += u[3 * nodes[a] + d] * s;
    }
    return v;
}

Vec3 interpolate_scalar_gradient(const BoxGrid& g, const Vec& f, const Vec3& x) {
    double xi[3];
    auto nodes = g.cell_nodes(locate(g, x, xi));
    Vec3 v = Vec3::Zero();
    for (int a = 0; a < 8; ++a) {
        double dn[3];
        q1::shape_grad(a, xi, dn);
        for (int d = 0; d < 3; ++d) v[d] += f[nodes[a]] * dn[d];
    }
    return v / g.h;
}

Mat3 interpolate_vector_gradient(const BoxGrid& g, const Vec& u, const Vec3& x) {
    double xi[3];
    auto nodes = g.cell_nodes(locate(g, x, xi));
    Mat3 G = Mat3::Zero();
    for (int a = 0; a < 8; ++a) {
        double dn[3];
        q1::shape_grad(a, xi, dn);
        for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s) G(r, s) += u[3 * nodes[a] + r] * dn[s];
    }
    return G / g.h;
}

}  // namespace tphom
