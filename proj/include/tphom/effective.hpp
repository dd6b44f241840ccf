#pragma once

#include <array>
#include <string>

#include "tphom/cell_problems.hpp"
#include "tphom/materials.hpp"

namespace tphom {

struct EffectiveCoefficients {
    int resolution = 0;
    Mat6 A_hom = Mat6::Zero();     // raw A_ijkh in Voigt order (11,22,33,23,13,12)
    Mat6 A_energy = Mat6::Zero();  // energy-form assembly, for the agreement check
    std::array<Mat3, 2> B{Mat3::Zero(), Mat3::Zero()};
    std::array<Mat3, 2> D{Mat3::Zero(), Mat3::Zero()};
    std::array<Mat3, 2> C{Mat3::Zero(), Mat3::Zero()};
    std::array<Mat3, 2> K{Mat3::Zero(), Mat3::Zero()};
    std::array<Mat3, 2> L{Mat3::Zero(), Mat3::Zero()};
    std::array<double, 2> phi_star{0, 0}, alpha_star{0, 0}, c_star{0, 0}, gamma_star{0, 0};
    std::array<double, 2> g_star{0, 0}, h_star{0, 0};
    Vec3 f_star = Vec3::Zero();
    double zeta_star = 0.0, omega_star = 0.0;
    // Phase constants entering the strain-coupling terms beta_m C_m : e(u), gamma_m C_m : e(u).
    std::array<double, 2> beta{0, 0}, gamma{0, 0};
    std::array<double, 2> volume{0, 0};
    double interface_area = 0.0;
    std::string interface_reading = "per_phase_zero_flux";
    double energy_form_mismatch = 0.0;

    // hom_stress = A_hom : e
    Mat3 hom_stress(const Mat3& strain) const;
};

// Surface integral of a cell profile over Sigma by face quadrature.
double interface_integral(const UnitCellMesh& cell, const Profile& p);

Mat6 homogenized_elasticity(const UnitCellMesh& cell, const PhaseParameters& params, const std::array<Vec, 6>& w,
                            Mat6* energy_form = nullptr);
void biot_and_dilation_matrices(const UnitCellMesh& cell, const PhaseParameters& params, const CellCorrectors& cc,
                                EffectiveCoefficients& out);
std::array<Mat3, 2> coupling_matrices(const UnitCellMesh& cell, const std::array<Vec, 6>& w);
void transport_tensors(const UnitCellMesh& cell, const PhaseParameters& params, const CellCorrectors& cc,
                       EffectiveCoefficients& out);
void starred_scalars(const UnitCellMesh& cell, const PhaseParameters& params, const Sources& sources,
                     EffectiveCoefficients& out);

EffectiveCoefficients compute_effective_coefficients(const CellCorrectors& cc, const PhaseParameters& params,
                                                     const Sources& sources = {});

// Voigt (arithmetic) and Reuss (harmonic) bounds of the phase stiffnesses.
Mat6 voigt_bound(const UnitCellMesh& cell, const PhaseParameters& params);
Mat6 reuss_bound(const UnitCellMesh& cell, const PhaseParameters& params);

}  // namespace tphom
