#pragma once

#include <iosfwd>
#include <string>

#include "tphom/config.hpp"

namespace tphom {

struct PipelineOptions {
    std::string out_dir;  // overrides the config output directory when nonempty
    std::string coeffs_path;
    int threads = 1;
    bool sequential = false;
    bool override_desk_cap = false;
};

// Each command writes its files and returns the process exit code; input errors propagate as tphom::Error.
int cmd_upscale(const RunConfig& cfg, const PipelineOptions& opts);
int cmd_macro(const RunConfig& cfg, const PipelineOptions& opts);
int cmd_dns(const RunConfig& cfg, const PipelineOptions& opts);
int cmd_verify(const RunConfig& cfg, const PipelineOptions& opts);
// Analytic-oracle checks on small cells; one PASS/FAIL line each.
int cmd_selftest(std::ostream& out, int threads = 1);

}  // namespace tphom
