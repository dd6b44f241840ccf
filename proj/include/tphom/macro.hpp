#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "tphom/effective.hpp"
#include "tphom/fem.hpp"
#include "tphom/transient.hpp"

namespace tphom {

// Structured Q1 grid on (0,1)^3 with M cells per axis.
struct BoxGrid {
    int M = 1;
    double h = 1.0;
    explicit BoxGrid(int cells = 1) : M(cells), h(1.0 / cells) {}
    int nodes_per_axis() const { return M + 1; }
    int num_nodes() const { return (M + 1) * (M + 1) * (M + 1); }
    int num_cells() const { return M * M * M; }
    int node(int i, int j, int k) const { return i + (M + 1) * (j + (M + 1) * k); }
    std::array<int, 3> node_ijk(int v) const { return {v % (M + 1), (v / (M + 1)) % (M + 1), v / ((M + 1) * (M + 1))}; }
    std::array<int, 3> cell_ijk(int c) const { return {c % M, (c / M) % M, c / (M * M)}; }
    std::array<int, 8> cell_nodes(int c) const;
    Vec3 cell_origin(int c) const;
    bool on_boundary(int v) const;
    // Interior-node index ((M-1)^3 nodes), -1 on the boundary.
    int interior_index(int v) const;
};

struct MacroState {
    double t = 0.0;
    Vec u;                 // 3 per node, interleaved
    std::array<Vec, 2> p;  // nodal
    std::array<Vec, 2> th;
};

struct MacroOptions {
    int resolution = 8;
    double dt = 0.1;
    double t_end = 1.0;
    int output_every = 1;
    bool natural_bc = false;            // p1, th1 natural as well (Gamma-free variant)
    bool elastostatic_initial = false;  // u(0) from the static balance with the t=0 loads
    StepSolverOptions solver;
};

// Per-step terms of the discrete energy identities (pressure and thermal), plus the natural energy.
struct LedgerRow {
    double t = 0.0;
    double elastic = 0.0;   // 1/2 e(u):A e(u) + gradient-coupling work is not included
    double storage = 0.0;   // 1/2 s.S s over all scalar fields
    double diffusion = 0.0; // dt * (K grad p, grad p) + dt * (L grad th, grad th) this step
    double exchange = 0.0;  // dt * zeta* |p1-p2|^2 + dt * omega* |th1-th2|^2 this step
    // pressure identity
    double p_storage = 0.0;    // 1/2 phi* |p^n|^2
    double p_numerical = 0.0;  // 1/2 phi* |p^n - p^{n-1}|^2
    double p_coupling = 0.0;   // (beta C:e(du) + alpha* dth, (p^n + p^{n-1})/2)
    double p_diffusion = 0.0;
    double p_exchange = 0.0;
    double p_source = 0.0;     // dt (g*, p^n)
    // thermal identity
    double th_storage = 0.0, th_numerical = 0.0, th_coupling = 0.0, th_diffusion = 0.0, th_exchange = 0.0,
           th_source = 0.0;
};

struct EnergyLedger {
    std::vector<LedgerRow> rows;  // rows[0] is the initial state
    double pressure_residual() const;
    double thermal_residual() const;
};

class MacroSolver {
public:
    MacroSolver(const EffectiveCoefficients& coeffs, const MacroOptions& opts);

    const MacroOptions& options() const { return opts_; }
    const BoxGrid& grid() const { return grid_; }
    const TransientBlocks& blocks() const { return blocks_; }
    int num_unknowns() const { return static_cast<int>(blocks_.Kuu.rows() + blocks_.S.rows()); }

    MacroState zero_state() const;
    MacroState initial_state(const MacroLoads& loads);
    MacroState step(const MacroState& prev, const MacroLoads& loads);

    struct Result {
        std::vector<MacroState> states;  // initial state and every output_every-th step, plus the final one
        EnergyLedger ledger;
        std::vector<SolveStats> stats;
    };
    Result run(const MacroLoads& loads, const std::function<void(const MacroState&)>& on_output = {});

    // Reduced-space helpers.
    Vec pack_u(const MacroState& s) const;
    Vec pack_s(const MacroState& s) const;
    void unpack(const Vec& u, const Vec& s, MacroState& out) const;
    Vec load_u(const MacroLoads& l, double t) const;
    Vec load_s(const MacroLoads& l, double t) const;

    // Component operators on the scalar block (fields p1 | p2 | th1 | th2).
    const SpMat& storage_phi() const { return Sphi_; }
    const SpMat& storage_alpha() const { return Salpha_; }
    const SpMat& storage_c() const { return Sc_; }
    const SpMat& diffusion_p() const { return Kp_; }
    const SpMat& diffusion_th() const { return Kth_; }
    const SpMat& exchange_p() const { return Xp_; }
    const SpMat& exchange_th() const { return Xth_; }
    const SpMat& strain_beta() const { return Ksu_beta_; }
    const SpMat& strain_gamma() const { return Ksu_gamma_; }
    // Mask selecting the entries of field f (0..3) in the scalar block.
    Vec field_mask(int f) const;
    const SolveStats& last_stats() const { return stepper_->last_stats(); }

private:
    LedgerRow ledger_row(const MacroState& cur, const MacroState* prev, const Vec& Fs) const;

    EffectiveCoefficients c_;
    MacroOptions opts_;
    BoxGrid grid_;
    DofTable utab_, stab_;
    std::array<std::vector<int>, 4> field_dof_;  // node -> dof within the scalar block, -1 if constrained
    std::vector<int> u_dof_;                     // node -> interior index
    SpMat Sphi_, Salpha_, Sc_, Kp_, Kth_, Xp_, Xth_, Ksu_beta_, Ksu_gamma_;
    TransientBlocks blocks_;
    std::unique_ptr<TransientStepper> stepper_;
};

// Checks phi_m* c_m* > (alpha_m*)^2; throws WellPosednessError.
void validate_macro_coefficients(const EffectiveCoefficients& c);

// Standalone two-field diffusion with exchange (oracle for the decoupled limits):
//   storage_m x_m' - div(K_m grad x_m) + X (x_m - x_other) = load_m,
// field 1 zero on the boundary (unless natural), field 2 natural. Nodal fields on a BoxGrid.
class DualDiffusionSolver {
public:
    DualDiffusionSolver(int M, double dt, std::array<double, 2> storage, std::array<Mat3, 2> K, double exchange,
                        bool natural = false, double tol = 1e-13);
    std::array<Vec, 2> step(const std::array<Vec, 2>& prev, const std::array<ScalarField, 2>& loads, double t) const;
    const BoxGrid& grid() const { return grid_; }

private:
    BoxGrid grid_;
    double dt_;
    double tol_;
    int n1_ = 0, n2_ = 0;
    std::vector<int> dof1_, dof2_;
    Eigen::SparseMatrix<double> S_, A_;
};

// Trilinear interpolation of nodal fields on a BoxGrid.
double interpolate_scalar(const BoxGrid& g, const Vec& f, const Vec3& x);
Vec3 interpolate_vector(const BoxGrid& g, const Vec& u, const Vec3& x);
Vec3 interpolate_scalar_gradient(const BoxGrid& g, const Vec& f, const Vec3& x);
Mat3 interpolate_vector_gradient(const BoxGrid& g, const Vec& u, const Vec3& x);

}  // namespace tphom
