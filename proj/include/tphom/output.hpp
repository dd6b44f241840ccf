#pragma once

#include <string>
#include <vector>

#include "tphom/dns.hpp"
#include "tphom/effective.hpp"
#include "tphom/macro.hpp"
#include "tphom/verification.hpp"

namespace tphom {

std::string coefficients_to_json(const EffectiveCoefficients& c);
EffectiveCoefficients coefficients_from_json(const std::string& text);
void write_coefficients_json(const std::string& path, const EffectiveCoefficients& c);
// Throws ConfigError if the file is missing or incomplete.
EffectiveCoefficients read_coefficients_json(const std::string& path);
void write_coefficients_csv(const std::string& path, const EffectiveCoefficients& c);

// Legacy ASCII structured points.
void write_vtk(const std::string& path, const BoxGrid& grid, const MacroState& s);
void write_vtk(const std::string& path, const MicroMesh& mesh, const MicroState& s);

void write_energy_csv(const std::string& path, const EnergyLedger& ledger);
void write_norms_json(const std::string& path, const std::vector<MicroNorms>& norms, const std::vector<SolveStats>& stats,
                      const std::vector<double>& energy, double interface_residual);
void write_report_csv(const std::string& path, const ConvergenceReport& r);
void write_report_json(const std::string& path, const ConvergenceReport& r);

// Output file name for time-step index k: prefix_00012.vtk
std::string series_name(const std::string& dir, const std::string& prefix, int k);
void ensure_directory(const std::string& dir);

}  // namespace tphom
