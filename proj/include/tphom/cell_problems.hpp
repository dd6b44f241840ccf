#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "tphom/linear_solvers.hpp"
#include "tphom/materials.hpp"
#include "tphom/unit_cell.hpp"

namespace tphom {

// Scalar unknowns of one phase: periodic nodes touching a phase-m cell.
struct PhaseSpace {
    int phase = 1;
    int ndofs = 0;
    std::vector<int> node_dof;  // periodic node -> dof or -1
    std::vector<int> component; // dof -> connected component id
    int num_components = 0;
    Vec lumped;                 // lumped volume per dof
};

PhaseSpace build_phase_space(const UnitCellMesh& cell, int phase);

struct CellProblemOptions {
    SolverOptions solver;
    int threads = 1;
};

class CellCorrectors {
public:
    std::shared_ptr<const UnitCellMesh> cell;
    // w^{kh} in Voigt order, 3 components per periodic node.
    std::array<Vec, 6> w;
    // pi[m][i], theta[m][i] on PhaseSpace m.
    std::array<std::array<Vec, 3>, 2> pi, theta;
    std::array<PhaseSpace, 2> space;
    std::vector<SolveStats> stats;
    std::string interface_reading = "per_phase_zero_flux";

    // Gradient of w^{kh} (row r = component, column s = derivative) at reference point xi of cell c.
    Mat3 w_gradient(int voigt, int c, const double* xi) const;
    // Gradient of pi_m^i or theta_m^i at reference point xi of a phase-m cell c.
    Vec3 pi_gradient(int m, int i, int c, const double* xi) const;
    Vec3 theta_gradient(int m, int i, int c, const double* xi) const;
    // Cell c containing y in [0,1)^3 and the reference coordinates of y in it.
    int locate(const Vec3& y, double* xi) const;

private:
    Vec3 scalar_gradient(const Vec& f, int m, int c, const double* xi) const;
};

std::array<Vec, 6> solve_elastic_correctors(const UnitCellMesh& cell, const PhaseParameters& params,
                                            const CellProblemOptions& opts = {}, std::vector<SolveStats>* stats = nullptr);
// Per-phase zero-flux problems; `conductivity` selects lambda-hat instead of kappa.
std::array<Vec, 3> solve_phase_correctors(const UnitCellMesh& cell, const PhaseSpace& space, double coefficient,
                                          const CellProblemOptions& opts = {}, std::vector<SolveStats>* stats = nullptr);
std::array<Vec, 3> solve_pressure_correctors(const UnitCellMesh& cell, const PhaseParameters& params, int phase,
                                             const CellProblemOptions& opts = {});
std::array<Vec, 3> solve_temperature_correctors(const UnitCellMesh& cell, const PhaseParameters& params, int phase,
                                                const CellProblemOptions& opts = {});

CellCorrectors solve_cell_problems(std::shared_ptr<const UnitCellMesh> cell, const PhaseParameters& params,
                                   const CellProblemOptions& opts = {});

// Net normal flux of coef*(e^i + grad f) through the interface, taken from the phase-m side.
double interface_flux(const UnitCellMesh& cell, const PhaseSpace& space, const Vec& f, int i, double coef);

}  // namespace tphom
