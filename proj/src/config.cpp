#include "tphom/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tphom/errors.hpp"

namespace tphom {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

double number(const json& j, const std::string& key, double fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError(where + "." + key + " must be a number");
    return j[key].get<double>();
}

int integer(const json& j, const std::string& key, int fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
    return j[key].get<int>();
}

bool boolean(const json& j, const std::string& key, bool fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean()) throw ConfigError(where + "." + key + " must be true or false");
    return j[key].get<bool>();
}

std::array<double, 3> triple(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(where + " must be an array of 3 numbers");
    std::array<double, 3> v{};
    for (int d = 0; d < 3; ++d) {
        if (!j[d].is_number()) throw ConfigError(where + " must be an array of 3 numbers");
        v[d] = j[d].get<double>();
    }
    return v;
}

Profile parse_profile(const json& j, const std::string& where) {
    if (j.is_number()) return Profile::constant(j.get<double>());
    check_keys(j, where, {"profile", "a", "b", "axis"});
    Profile p;
    std::string kind = j.value("profile", "constant");
    if (kind == "constant") p.kind = Profile::Kind::Constant;
    else if (kind == "affine") p.kind = Profile::Kind::Affine;
    else if (kind == "sine") p.kind = Profile::Kind::Sine;
    else throw ConfigError(where + ".profile must be constant, affine or sine");
    p.a = number(j, "a", 1.0, where);
    p.b = number(j, "b", 0.0, where);
    p.axis = integer(j, "axis", 0, where);
    if (p.axis < 0 || p.axis > 2) throw ConfigError(where + ".axis must be 0, 1 or 2");
    return p;
}

Phase parse_phase(const json& j, const std::string& where) {
    check_keys(j, where, {"lambda", "mu", "beta", "gamma", "alpha", "phi", "kappa", "conductivity", "capacity"});
    Phase p;
    p.lambda = number(j, "lambda", p.lambda, where);
    p.mu = number(j, "mu", p.mu, where);
    p.beta = number(j, "beta", p.beta, where);
    p.gamma = number(j, "gamma", p.gamma, where);
    p.alpha = number(j, "alpha", p.alpha, where);
    p.phi = number(j, "phi", p.phi, where);
    p.kappa = number(j, "kappa", p.kappa, where);
    p.conductivity = number(j, "conductivity", p.conductivity, where);
    p.capacity = number(j, "capacity", p.capacity, where);
    return p;
}

SourceSpec parse_source(const json& j, const std::string& where, bool vector) {
    SourceSpec s;
    if (j.is_number()) {
        if (vector) throw ConfigError(where + " must be an object or an array of 3 numbers");
        s.value[0] = j.get<double>();
        return s;
    }
    if (j.is_array()) {
        if (!vector) throw ConfigError(where + " must be a number or an object");
        auto v = triple(j, where);
        s.value = Vec3(v[0], v[1], v[2]);
        return s;
    }
    check_keys(j, where, {"value", "space", "time"});
    if (j.contains("value")) {
        const json& v = j["value"];
        if (vector) {
            auto t = triple(v, where + ".value");
            s.value = Vec3(t[0], t[1], t[2]);
        } else {
            if (!v.is_number()) throw ConfigError(where + ".value must be a number");
            s.value[0] = v.get<double>();
        }
    }
    std::string space = j.value("space", "constant");
    if (space == "constant") s.space = SourceSpec::Space::Constant;
    else if (space == "sine") s.space = SourceSpec::Space::Sine;
    else throw ConfigError(where + ".space must be constant or sine");
    std::string time = j.value("time", "constant");
    if (time == "constant") s.time = SourceSpec::Time::Constant;
    else if (time == "linear") s.time = SourceSpec::Time::Linear;
    else throw ConfigError(where + ".time must be constant or linear");
    return s;
}

void parse_sources(const json& j, Sources& out) {
    check_keys(j, "sources", {"f", "g", "h"});
    auto pair = [&](const char* key, std::array<SourceSpec, 2>& dst, bool vector) {
        if (!j.contains(key)) return;
        const json& v = j[key];
        std::string where = std::string("sources.") + key;
        if (!v.is_array() || v.size() != 2) throw ConfigError(where + " must list one entry per phase");
        for (int m = 0; m < 2; ++m) dst[m] = parse_source(v[m], where + "[" + std::to_string(m) + "]", vector);
    };
    pair("f", out.f, true);
    pair("g", out.g, false);
    pair("h", out.h, false);
}

InclusionSpec parse_inclusion(const json& j, int n) {
    check_keys(j, "geometry.inclusion", {"type", "lo", "hi", "axis", "from", "to", "mask"});
    std::string type = j.value("type", "box");
    if (type == "box") {
        return InclusionSpec::box(triple(j.value("lo", json::array({0.25, 0.25, 0.25})), "geometry.inclusion.lo"),
                                  triple(j.value("hi", json::array({0.75, 0.75, 0.75})), "geometry.inclusion.hi"));
    }
    if (type == "laminate") {
        int axis = integer(j, "axis", 0, "geometry.inclusion");
        if (axis < 0 || axis > 2) throw ConfigError("geometry.inclusion.axis must be 0, 1 or 2");
        return InclusionSpec::laminate(axis, number(j, "from", 0.25, "geometry.inclusion"),
                                       number(j, "to", 0.75, "geometry.inclusion"));
    }
    if (type == "none") return InclusionSpec::none();
    if (type == "voxels") {
        if (!j.contains("mask") || !j["mask"].is_array()) throw ConfigError("geometry.inclusion.mask must be an array");
        std::vector<int> mask;
        for (const auto& v : j["mask"]) {
            if (!v.is_number_integer()) throw ConfigError("geometry.inclusion.mask entries must be integers");
            mask.push_back(v.get<int>());
        }
        if (static_cast<long>(mask.size()) != static_cast<long>(n) * n * n)
            throw ConfigError("geometry.inclusion.mask must have resolution^3 entries");
        return InclusionSpec::voxels(std::move(mask));
    }
    throw ConfigError("geometry.inclusion.type must be box, laminate, voxels or none");
}

double parse_eps_entry(const json& v) {
    if (v.is_number()) {
        double e = v.get<double>();
        reciprocal_integer(e);
        return e;
    }
    if (v.is_string()) return parse_epsilon(v.get<std::string>());
    throw ConfigError("eps_list entries must be numbers or strings like \"1/4\"");
}

}  // namespace

double parse_epsilon(const std::string& s) {
    double e = 0.0;
    auto slash = s.find('/');
    try {
        size_t used = 0;
        if (slash == std::string::npos) {
            e = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
        } else {
            double num = std::stod(s.substr(0, slash), &used);
            if (used != slash) throw std::invalid_argument(s);
            std::string den_s = s.substr(slash + 1);
            double den = std::stod(den_s, &used);
            if (used != den_s.size()) throw std::invalid_argument(s);
            e = num / den;
        }
    } catch (const std::logic_error&) {
        throw ConfigError("cannot read epsilon '" + s + "'");
    }
    reciprocal_integer(e);
    return e;
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    check_keys(j, "config",
               {"geometry", "phases", "interface", "sources", "time", "macro", "dns", "verify", "solver", "output"});
    RunConfig c;
    try {
        if (j.contains("geometry")) {
            const json& g = j["geometry"];
            check_keys(g, "geometry", {"resolution", "inclusion", "allow_boundary_inclusion", "allow_empty_phase"});
            c.resolution = integer(g, "resolution", c.resolution, "geometry");
            if (c.resolution < 2) throw ConfigError("geometry.resolution must be at least 2");
            if (g.contains("inclusion")) c.inclusion = parse_inclusion(g["inclusion"], c.resolution);
            c.geometry.allow_boundary_inclusion = boolean(g, "allow_boundary_inclusion", false, "geometry");
            c.geometry.allow_empty_phase = boolean(g, "allow_empty_phase", false, "geometry");
        }
        if (!j.contains("phases")) throw ConfigError("phases: two phase parameter sets are required");
        {
            const json& p = j["phases"];
            if (!p.is_array() || p.size() != 2) throw ConfigError("phases must list exactly two phases");
            for (int m = 0; m < 2; ++m) c.params.phase[m] = parse_phase(p[m], "phases[" + std::to_string(m) + "]");
        }
        if (j.contains("interface")) {
            const json& i = j["interface"];
            check_keys(i, "interface", {"zeta", "omega", "insulated", "corrector_interface_reading"});
            if (i.contains("zeta")) c.params.zeta = parse_profile(i["zeta"], "interface.zeta");
            if (i.contains("omega")) c.params.omega = parse_profile(i["omega"], "interface.omega");
            c.params.insulated = boolean(i, "insulated", false, "interface");
            c.interface_reading = i.value("corrector_interface_reading", c.interface_reading);
            if (c.interface_reading != "per_phase_zero_flux")
                throw ConfigError("interface.corrector_interface_reading: only per_phase_zero_flux is implemented");
        }
        if (j.contains("sources")) parse_sources(j["sources"], c.sources);
        if (j.contains("time")) {
            const json& t = j["time"];
            check_keys(t, "time", {"dt", "t_end", "output_every"});
            c.macro.dt = number(t, "dt", c.macro.dt, "time");
            c.macro.t_end = number(t, "t_end", c.macro.t_end, "time");
            c.macro.output_every = integer(t, "output_every", c.macro.output_every, "time");
        }
        if (!(c.macro.dt > 0) || !(c.macro.t_end >= 0)) throw ConfigError("time.dt must be positive, time.t_end nonnegative");
        if (c.macro.output_every < 1) throw ConfigError("time.output_every must be at least 1");
        double steps = c.macro.t_end / c.macro.dt;
        if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
            throw ConfigError("time.t_end must be an integer multiple of time.dt");
        if (j.contains("macro")) {
            const json& m = j["macro"];
            check_keys(m, "macro", {"resolution", "natural_bc", "elastostatic_initial"});
            c.macro.resolution = integer(m, "resolution", c.macro.resolution, "macro");
            c.macro.natural_bc = boolean(m, "natural_bc", false, "macro");
            c.macro.elastostatic_initial = boolean(m, "elastostatic_initial", false, "macro");
        }
        if (c.macro.resolution < 2) throw ConfigError("macro.resolution must be at least 2");
        c.dns.dt = c.macro.dt;
        c.dns.t_end = c.macro.t_end;
        c.dns.output_every = c.macro.output_every;
        if (j.contains("dns")) {
            const json& d = j["dns"];
            check_keys(d, "dns", {"epsilon", "merged"});
            if (d.contains("epsilon")) c.dns_epsilon = parse_eps_entry(d["epsilon"]);
            c.dns_merged = boolean(d, "merged", false, "dns");
        }
        if (j.contains("verify")) {
            const json& v = j["verify"];
            check_keys(v, "verify", {"eps_list"});
            if (v.contains("eps_list")) {
                if (!v["eps_list"].is_array()) throw ConfigError("verify.eps_list must be an array");
                for (const auto& e : v["eps_list"]) c.eps_list.push_back(parse_eps_entry(e));
            }
        }
        if (j.contains("solver")) {
            const json& s = j["solver"];
            check_keys(s, "solver", {"cell", "tol", "accept"});
            std::string kind = s.value("cell", "cg");
            if (kind == "cg") c.cell.solver.kind = SolverKind::ConjugateGradient;
            else if (kind == "dense") c.cell.solver.kind = SolverKind::Dense;
            else throw ConfigError("solver.cell must be cg or dense");
            c.cell.solver.tol = number(s, "tol", c.cell.solver.tol, "solver");
            c.macro.solver.tol = c.dns.solver.tol = c.cell.solver.tol;
            c.macro.solver.accept = c.dns.solver.accept = number(s, "accept", c.macro.solver.accept, "solver");
        }
        if (j.contains("output")) {
            const json& o = j["output"];
            check_keys(o, "output", {"directory", "verbosity", "vtk"});
            c.output_dir = o.value("directory", c.output_dir);
            c.verbosity = integer(o, "verbosity", c.verbosity, "output");
            c.write_vtk = boolean(o, "vtk", true, "output");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid config value: ") + e.what());
    }
    c.params.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace tphom
