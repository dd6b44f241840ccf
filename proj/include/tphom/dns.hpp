#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tphom/fem.hpp"
#include "tphom/materials.hpp"
#include "tphom/transient.hpp"
#include "tphom/unit_cell.hpp"

namespace tphom {

inline constexpr long kDeskCap = 1000000;

struct MicroState {
    double t = 0.0;
    Vec u;   // 3 per lattice node
    Vec p;   // one value per scalar unknown of the MicroMesh (duplicated at interface nodes)
    Vec th;
};

struct DnsOptions {
    double dt = 0.1;
    double t_end = 1.0;
    int output_every = 1;
    bool override_desk_cap = false;
    StepSolverOptions solver;
};

struct MicroNorms {
    double t = 0.0;
    double u_h1 = 0.0;       // ||e(u)||
    double p_v = 0.0;        // (sum_m ||p_m||^2_H1(Omega_m) + eps-weighted jump)^(1/2)
    double th_v = 0.0;
    double p_jump = 0.0;     // ||eps^(1/2) (p1 - p2)||_{Sigma^eps}
    double th_jump = 0.0;
};

class MicroSolver {
public:
    MicroSolver(std::shared_ptr<const MicroMesh> mesh, const PhaseParameters& params, const DnsOptions& opts);

    const MicroMesh& mesh() const { return *mesh_; }
    const TransientBlocks& blocks() const { return blocks_; }
    long num_unknowns() const { return static_cast<long>(blocks_.Kuu.rows() + blocks_.S.rows()); }

    MicroState zero_state() const;
    MicroState step(const MicroState& prev, const MicroLoads& loads);

    struct Result {
        std::vector<MicroState> states;
        std::vector<MicroNorms> norms;
        std::vector<SolveStats> stats;
        std::vector<double> energy;  // natural energy per step (u, storage)
    };
    Result run(const MicroLoads& loads, const std::function<void(const MicroState&)>& on_output = {});

    MicroNorms norms(const MicroState& s) const;
    const SolveStats& last_stats() const { return stepper_->last_stats(); }
    double natural_energy(const MicroState& s) const;

    Vec pack_u(const MicroState& s) const;
    Vec pack_s(const MicroState& s) const;
    void unpack(const Vec& u, const Vec& s, MicroState& out) const;
    Vec load_u(const MicroLoads& l, double t) const;
    Vec load_s(const MicroLoads& l, double t) const;

    // Interface jump forms on the full scalar space of the MicroMesh (eps*zeta, eps*omega, eps*1).
    const SpMat& jump_p() const { return Jp_; }
    const SpMat& jump_th() const { return Jth_; }
    const SpMat& jump_unit() const { return J1_; }
    // Scalar-space dof of phase m at lattice node v (pressure and temperature share the map).
    int scalar_dof(int m, int v) const { return mesh_->side_dof[m][v]; }
    int free_scalar(int d) const { return s_free_[d]; }
    // Residual of the interface balance (one-sided variational flux plus the exchange term) at
    // interface unknowns for the step prev -> cur, relative to the step right-hand side.
    double interface_flux_residual(const MicroState& prev, const MicroState& cur, const MicroLoads& loads) const;

private:
    std::shared_ptr<const MicroMesh> mesh_;
    PhaseParameters params_;
    DnsOptions opts_;
    std::vector<int> u_dof_;
    std::vector<int> s_free_;  // scalar-space dof -> free index (-1 on Gamma for phase 1)
    int ns1_ = 0;              // free scalar unknowns per field
    DofTable utab_, stab_;
    SpMat Jp_, Jth_, J1_;
    TransientBlocks blocks_;
    std::unique_ptr<TransientStepper> stepper_;
};

}  // namespace tphom
