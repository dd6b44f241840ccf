#pragma once

#include <string>
#include <vector>

#include "tphom/cell_problems.hpp"
#include "tphom/dns.hpp"
#include "tphom/macro.hpp"
#include "tphom/materials.hpp"
#include "tphom/unit_cell.hpp"

namespace tphom {

struct RunConfig {
    int resolution = 8;
    InclusionSpec inclusion;
    GeometryOptions geometry;
    PhaseParameters params;
    std::string interface_reading = "per_phase_zero_flux";
    Sources sources;
    MacroOptions macro;
    DnsOptions dns;
    double dns_epsilon = 0.5;
    bool dns_merged = false;
    std::vector<double> eps_list;
    CellProblemOptions cell;
    std::string output_dir = "out";
    int verbosity = 1;
    bool write_vtk = true;
};

// Parses and validates a JSON document; throws ConfigError (syntax, schema) or the material errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// "1/8", 0.125 -> 0.125; the reciprocal must be an integer.
double parse_epsilon(const std::string& s);

}  // namespace tphom
