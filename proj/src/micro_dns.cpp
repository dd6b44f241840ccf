#include "tphom/dns.hpp"

#include <cmath>

#include "tphom/errors.hpp"
#include "tphom/log.hpp"

namespace tphom {

namespace {

template <int R, int C>
void put(double* ke, int width, int r0, int c0, const Eigen::Matrix<double, R, C>& m) {
    for (int a = 0; a < R; ++a)
        for (int b = 0; b < C; ++b) ke[(r0 + a) * width + c0 + b] += m(a, b);
}

Vec3 cell_origin(const MicroMesh& m, int c) {
    auto ijk = m.cell_ijk(c);
    return Vec3(ijk[0] * m.h, ijk[1] * m.h, ijk[2] * m.h);
}

}  // namespace

MicroSolver::MicroSolver(std::shared_ptr<const MicroMesh> mesh, const PhaseParameters& params, const DnsOptions& opts)
    : mesh_(std::move(mesh)), params_(params), opts_(opts) {
    params_.validate();
    const MicroMesh& m = *mesh_;
    const int N = m.N;
    const int nn = m.num_nodes();

    u_dof_.assign(nn, -1);
    int nu_nodes = 0;
    for (int v = 0; v < nn; ++v)
        if (!m.on_boundary[v]) u_dof_[v] = nu_nodes++;
    const int nu = 3 * nu_nodes;

    s_free_.assign(m.n_scalar, -1);
    std::vector<std::uint8_t> fixed(m.n_scalar, 0);
    for (int v = 0; v < nn; ++v)
        if (m.on_boundary[v] && m.side_dof[0][v] >= 0) fixed[m.side_dof[0][v]] = 1;
    ns1_ = 0;
    for (int d = 0; d < m.n_scalar; ++d)
        if (!fixed[d]) s_free_[d] = ns1_++;
    const long total = static_cast<long>(nu) + 2L * ns1_;
    if (total > kDeskCap && !opts.override_desk_cap)
        throw ConfigError("DNS needs " + std::to_string(total) +
                          " unknowns, above the desk cap of 1e6; pass --override-desk-cap to run anyway");

    utab_.width = 24;
    utab_.ndofs = nu;
    stab_.width = 16;
    stab_.ndofs = 2 * ns1_;
    utab_.dofs.resize(static_cast<size_t>(m.num_cells()) * 24);
    stab_.dofs.resize(static_cast<size_t>(m.num_cells()) * 16);
    for (int c = 0; c < m.num_cells(); ++c) {
        auto nodes = m.cell_nodes(c);
        int side = m.labels[c] - 1;
        for (int a = 0; a < 8; ++a) {
            int ui = u_dof_[nodes[a]];
            for (int d = 0; d < 3; ++d) utab_.dofs[static_cast<size_t>(c) * 24 + 3 * a + d] = ui < 0 ? -1 : 3 * ui + d;
            int sd = m.side_dof[side][nodes[a]];
            int fr = sd < 0 ? -1 : s_free_[sd];
            stab_.dofs[static_cast<size_t>(c) * 16 + a] = fr;
            stab_.dofs[static_cast<size_t>(c) * 16 + 8 + a] = fr < 0 ? -1 : fr + ns1_;
        }
    }

    const double h = m.h;
    const Mat8 Me = local_mass(h);
    const Mat8 Ke = local_scalar_stiffness(h, Mat3::Identity());
    std::array<Mat24, 2> Kel;
    std::array<Mat24x8, 2> Gb, Gg;
    std::array<Mat8x24, 2> Cb, Cg;
    for (int q = 0; q < 2; ++q) {
        const Phase& ph = params_.phase[q];
        Kel[q] = local_elastic(h, ph.stiffness());
        Gb[q] = local_gradient_coupling(h, ph.beta * Mat3::Identity());
        Gg[q] = local_gradient_coupling(h, ph.gamma * Mat3::Identity());
        Cb[q] = local_strain_coupling(h, ph.beta * Mat3::Identity());
        Cg[q] = local_strain_coupling(h, ph.gamma * Mat3::Identity());
    }
    auto phase = [&](int c) { return m.labels[c] - 1; };

    blocks_.Kuu = assemble(utab_, utab_, [&](int c, double* ke) {
        Eigen::Map<Eigen::Matrix<double, 24, 24, Eigen::RowMajor>>{ke} = Kel[phase(c)];
        return true;
    });
    blocks_.Kus = assemble(utab_, stab_, [&](int c, double* ke) {
        put(ke, 16, 0, 0, Gb[phase(c)]);
        put(ke, 16, 0, 8, Gg[phase(c)]);
        return true;
    });
    blocks_.Ksu = assemble(stab_, utab_, [&](int c, double* ke) {
        put(ke, 24, 0, 0, Cb[phase(c)]);
        put(ke, 24, 8, 0, Cg[phase(c)]);
        return true;
    });
    blocks_.S = assemble(stab_, stab_, [&](int c, double* ke) {
        const Phase& ph = params_.phase[phase(c)];
        put(ke, 16, 0, 0, Mat8(ph.phi * Me));
        put(ke, 16, 0, 8, Mat8(ph.alpha * Me));
        put(ke, 16, 8, 0, Mat8(ph.alpha * Me));
        put(ke, 16, 8, 8, Mat8(ph.capacity * Me));
        return true;
    });
    SpMat Kd = assemble(stab_, stab_, [&](int c, double* ke) {
        const Phase& ph = params_.phase[phase(c)];
        put(ke, 16, 0, 0, Mat8(ph.kappa * Ke));
        put(ke, 16, 8, 8, Mat8(ph.conductivity * Ke));
        return true;
    });

    if (!m.merged && !m.interface_faces.empty()) {
        Jp_ = assemble_interface_coupling(m, params_.zeta);
        Jth_ = assemble_interface_coupling(m, params_.omega);
        J1_ = assemble_interface_coupling(m, Profile::constant(1.0));
        // Restriction of the scalar space onto the p and theta halves of the free unknowns.
        std::vector<Eigen::Triplet<double>> tp, tt;
        for (int d = 0; d < m.n_scalar; ++d)
            if (s_free_[d] >= 0) {
                tp.emplace_back(s_free_[d], d, 1.0);
                tt.emplace_back(ns1_ + s_free_[d], d, 1.0);
            }
        SpMat Pp(2 * ns1_, m.n_scalar), Pt(2 * ns1_, m.n_scalar);
        Pp.setFromTriplets(tp.begin(), tp.end());
        Pt.setFromTriplets(tt.begin(), tt.end());
        SpMat Xp = Pp * Jp_ * SpMat(Pp.transpose());
        SpMat Xt = Pt * Jth_ * SpMat(Pt.transpose());
        blocks_.D = Kd + Xp + Xt;
    } else {
        Jp_ = Jth_ = J1_ = SpMat(m.n_scalar, m.n_scalar);
        blocks_.D = Kd;
    }
    blocks_.grid_cells = N;
    stepper_ = std::make_unique<TransientStepper>(blocks_, opts.dt, opts.solver);
    log::debug("DNS system: " + std::to_string(nu) + " displacement + " + std::to_string(2 * ns1_) + " scalar unknowns");
}

MicroState MicroSolver::zero_state() const {
    MicroState s;
    s.u = Vec::Zero(3 * mesh_->num_nodes());
    s.p = Vec::Zero(mesh_->n_scalar);
    s.th = Vec::Zero(mesh_->n_scalar);
    return s;
}

Vec MicroSolver::pack_u(const MicroState& s) const {
    Vec x = Vec::Zero(blocks_.Kuu.rows());
    for (size_t v = 0; v < u_dof_.size(); ++v)
        if (u_dof_[v] >= 0)
            for (int d = 0; d < 3; ++d) x[3 * u_dof_[v] + d] = s.u[3 * v + d];
    return x;
}

Vec MicroSolver::pack_s(const MicroState& s) const {
    Vec x = Vec::Zero(2 * ns1_);
    for (int d = 0; d < mesh_->n_scalar; ++d)
        if (s_free_[d] >= 0) {
            x[s_free_[d]] = s.p[d];
            x[ns1_ + s_free_[d]] = s.th[d];
        }
    return x;
}

void MicroSolver::unpack(const Vec& u, const Vec& s, MicroState& out) const {
    out.u = Vec::Zero(3 * mesh_->num_nodes());
    for (size_t v = 0; v < u_dof_.size(); ++v)
        if (u_dof_[v] >= 0)
            for (int d = 0; d < 3; ++d) out.u[3 * v + d] = u[3 * u_dof_[v] + d];
    out.p = Vec::Zero(mesh_->n_scalar);
    out.th = Vec::Zero(mesh_->n_scalar);
    for (int d = 0; d < mesh_->n_scalar; ++d)
        if (s_free_[d] >= 0) {
            out.p[d] = s[s_free_[d]];
            out.th[d] = s[ns1_ + s_free_[d]];
        }
}

Vec MicroSolver::load_u(const MicroLoads& l, double t) const {
    if (!l.f[0] && !l.f[1]) return Vec::Zero(blocks_.Kuu.rows());
    const MicroMesh& m = *mesh_;
    return assemble_vector(utab_, [&](int c, double* fe) {
        const auto& f = l.f[m.labels[c] - 1];
        if (!f) return false;
        local_vector_load(m.h, cell_origin(m, c), [&](const Vec3& x) { return f(x, t); }, fe);
        return true;
    });
}

Vec MicroSolver::load_s(const MicroLoads& l, double t) const {
    const MicroMesh& m = *mesh_;
    return assemble_vector(stab_, [&](int c, double* fe) {
        int q = m.labels[c] - 1;
        bool any = false;
        if (l.g[q]) {
            local_scalar_load(m.h, cell_origin(m, c), [&](const Vec3& x) { return l.g[q](x, t); }, fe);
            any = true;
        }
        if (l.h[q]) {
            local_scalar_load(m.h, cell_origin(m, c), [&](const Vec3& x) { return l.h[q](x, t); }, fe + 8);
            any = true;
        }
        return any;
    });
}

MicroState MicroSolver::step(const MicroState& prev, const MicroLoads& loads) {
    const double t = prev.t + opts_.dt;
    Vec u, s;
    stepper_->step(pack_u(prev), pack_s(prev), load_u(loads, t), load_s(loads, t), u, s);
    MicroState out;
    unpack(u, s, out);
    out.t = t;
    return out;
}

double MicroSolver::natural_energy(const MicroState& st) const {
    Vec u = pack_u(st), s = pack_s(st);
    return 0.5 * u.dot(blocks_.Kuu * u) + 0.5 * s.dot(blocks_.S * s);
}

MicroNorms MicroSolver::norms(const MicroState& st) const {
    const MicroMesh& m = *mesh_;
    const auto& R = q1::reference();
    const double h = m.h, vol = h * h * h;
    const Mat8 Me = local_mass(h);
    const Mat8 Ke = local_scalar_stiffness(h, Mat3::Identity());
    MicroNorms n;
    n.t = st.t;
    double eu = 0, pv = 0, tv = 0;
    for (int c = 0; c < m.num_cells(); ++c) {
        auto nodes = m.cell_nodes(c);
        int side = m.labels[c] - 1;
        Eigen::Matrix<double, 8, 1> pl, tl;
        for (int a = 0; a < 8; ++a) {
            int d = m.side_dof[side][nodes[a]];
            pl[a] = st.p[d];
            tl[a] = st.th[d];
        }
        pv += pl.dot((Me + Ke) * pl);
        tv += tl.dot((Me + Ke) * tl);
        for (int q = 0; q < 8; ++q) {
            Mat3 G = Mat3::Zero();
            for (int a = 0; a < 8; ++a)
                for (int r = 0; r < 3; ++r)
                    for (int s = 0; s < 3; ++s) G(r, s) += st.u[3 * nodes[a] + r] * R.qgrad[q][a][s] / h;
            Mat3 e = 0.5 * (G + G.transpose());
            eu += e.squaredNorm() * vol / 8.0;
        }
    }
    if (J1_.nonZeros()) {
        n.p_jump = std::sqrt(std::max(0.0, st.p.dot(J1_ * st.p)));
        n.th_jump = std::sqrt(std::max(0.0, st.th.dot(J1_ * st.th)));
    }
    n.u_h1 = std::sqrt(eu);
    n.p_v = std::sqrt(pv + n.p_jump * n.p_jump);
    n.th_v = std::sqrt(tv + n.th_jump * n.th_jump);
    return n;
}

double MicroSolver::interface_flux_residual(const MicroState& prev, const MicroState& cur, const MicroLoads& loads) const {
    const double dt = cur.t - prev.t;
    Vec u0 = pack_u(prev), s0 = pack_s(prev), u = pack_u(cur), s = pack_s(cur);
    Vec rhs = dt * load_s(loads, cur.t) + blocks_.S * s0 + blocks_.Ksu * u0;
    Vec r = rhs - (blocks_.Ksu * u + blocks_.S * s + dt * (blocks_.D * s));
    double worst = 0.0;
    const MicroMesh& m = *mesh_;
    for (int v = 0; v < m.num_nodes(); ++v) {
        if (!m.is_interface_node(v)) continue;
        for (int q = 0; q < 2; ++q) {
            int f = s_free_[m.side_dof[q][v]];
            if (f < 0) continue;
            worst = std::max({worst, std::abs(r[f]), std::abs(r[ns1_ + f])});
        }
    }
    double scale = rhs.norm();
    return scale > 0 ? worst / scale : worst;
}

MicroSolver::Result MicroSolver::run(const MicroLoads& loads, const std::function<void(const MicroState&)>& on_output) {
    Result res;
    MicroState cur = zero_state();
    res.states.push_back(cur);
    res.norms.push_back(norms(cur));
    res.energy.push_back(natural_energy(cur));
    if (on_output) on_output(cur);
    const int nsteps = static_cast<int>(std::llround(opts_.t_end / opts_.dt));
    for (int n = 1; n <= nsteps; ++n) {
        MicroState next = step(cur, loads);
        res.stats.push_back(stepper_->last_stats());
        cur = std::move(next);
        res.norms.push_back(norms(cur));
        res.energy.push_back(natural_energy(cur));
        if (n % std::max(1, opts_.output_every) == 0 || n == nsteps) {
            res.states.push_back(cur);
            if (on_output) on_output(cur);
        }
    }
    return res;
}

}  // namespace tphom
