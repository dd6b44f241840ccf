#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "tphom/cell_problems.hpp"
#include "tphom/dns.hpp"
#include "tphom/effective.hpp"
#include "tphom/macro.hpp"

namespace tphom {

// Corrector gradients at one point: e_y(u-hat), grad_y p-hat_m, grad_y theta-hat_m (only the phase the point lies in).
struct CorrectorSample {
    Mat3 strain = Mat3::Zero();
    Vec3 p = Vec3::Zero();
    Vec3 th = Vec3::Zero();
};

// Given macro strain and gradients at x, samples the unit-cell correctors at frac(x/eps).
// `phase` is the phase index (0 or 1) the point belongs to; throws SamplingError on a phase mismatch.
CorrectorSample reconstruct_correctors(const CellCorrectors& cc, double epsilon, const Vec3& x, int phase,
                                       const Mat3& macro_strain, const Vec3& grad_p, const Vec3& grad_th);

struct ErrorRow {
    double epsilon = 0.0;
    int dns_cells = 0;       // per axis
    long dns_unknowns = 0;
    double time = 0.0;       // comparison time
    double u_l2 = 0.0;
    std::array<double, 2> p_l2{0, 0}, th_l2{0, 0};
    // corrector-augmented gradient errors
    double u_corr = 0.0;
    std::array<double, 2> p_corr{0, 0}, th_corr{0, 0};
    // plain gradient errors and corrector norms (triangle-inequality gate)
    double u_plain = 0.0, u_corrector = 0.0;
    std::array<double, 2> p_plain{0, 0}, th_plain{0, 0}, p_corrector{0, 0}, th_corrector{0, 0};
    MicroNorms norms;
    double trace_constant = 0.0;
    double energy_dns = 0.0, energy_macro = 0.0;
    double seconds = 0.0;

    bool triangle_ok(double slack = 1e-10) const;
};

struct ConvergenceReport {
    std::vector<ErrorRow> rows;  // decreasing epsilon
    std::vector<std::string> warnings;
    // rows[i].x / rows[i+1].x for the corrector-augmented errors; names u, p1, p2, th1, th2.
    std::vector<std::array<double, 5>> ratios() const;
    // Monotone decrease of the corrector-augmented error for field 0..4 (u, p1, p2, th1, th2).
    bool monotone(int field) const;
    static double field_error(const ErrorRow& r, int field);
};

struct StudyConfig {
    std::shared_ptr<const UnitCellMesh> cell;
    PhaseParameters params;
    Sources sources;
    std::vector<double> eps_list;
    MacroOptions macro;
    DnsOptions dns;
    CellProblemOptions cell_options;
};

// Error quadrature on the DNS mesh for a single DNS state against the macro state at the same time.
ErrorRow compare_states(const MicroMesh& mesh, const MicroState& dns, const BoxGrid& grid, const MacroState& macro,
                        const CellCorrectors& cc, const EffectiveCoefficients& coeffs, const PhaseParameters& params);

// Upper estimate of eps |q|^2_Sigma / (eps^2 |grad q|^2 + |q|^2) over the given per-side scalar fields.
double trace_ratio(const MicroMesh& mesh, const Vec& q, int side);
double trace_constant(const MicroMesh& mesh, const std::vector<Vec>& fields);

// Smooth scalar field on the duplicated scalar space (same value on both sides).
Vec sample_scalar(const MicroMesh& mesh, const std::function<double(const Vec3&)>& f);

ConvergenceReport convergence_study(const StudyConfig& cfg);
ConvergenceReport convergence_study(const StudyConfig& cfg, const CellCorrectors& cc, const EffectiveCoefficients& coeffs);

struct IdentityResidual {
    double pressure = 0.0;
    double thermal = 0.0;
};
IdentityResidual energy_identity_residual(const EnergyLedger& ledger);

}  // namespace tphom
