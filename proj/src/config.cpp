#include "ckdv/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ckdv/grid.hpp"
#include "ckdv/kdv.hpp"

namespace ckdv {

using nlohmann::json;

namespace {

// ---- minimal TOML reader ----------------------------------------------
// Supports the subset these configs use: [section] headers (dotted allowed),
// key = value with numbers, booleans, "strings", and (nested) arrays.

struct TomlError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

json parse_toml_value(const std::string& raw, int line_no);

json parse_toml_array(const std::string& raw, int line_no) {
    json arr = json::array();
    std::string body = trim(raw.substr(1, raw.size() - 2));
    if (body.empty()) return arr;
    int depth = 0;
    bool in_string = false;
    std::string cur;
    for (char c : body) {
        if (c == '"') in_string = !in_string;
        if (!in_string) {
            if (c == '[') ++depth;
            if (c == ']') --depth;
            if (c == ',' && depth == 0) {
                arr.push_back(parse_toml_value(trim(cur), line_no));
                cur.clear();
                continue;
            }
        }
        cur += c;
    }
    if (!trim(cur).empty()) arr.push_back(parse_toml_value(trim(cur), line_no));
    return arr;
}

json parse_toml_value(const std::string& raw, int line_no) {
    if (raw.empty()) throw TomlError("line " + std::to_string(line_no) + ": missing value");
    if (raw.front() == '[') {
        if (raw.back() != ']')
            throw TomlError("line " + std::to_string(line_no) + ": unterminated array");
        return parse_toml_array(raw, line_no);
    }
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"')
            throw TomlError("line " + std::to_string(line_no) + ": unterminated string");
        return raw.substr(1, raw.size() - 2);
    }
    if (raw == "true") return true;
    if (raw == "false") return false;
    try {
        std::size_t pos = 0;
        if (raw.find_first_of(".eE") == std::string::npos) {
            const long long v = std::stoll(raw, &pos);
            if (pos == raw.size()) return v;
        } else {
            const double v = std::stod(raw, &pos);
            if (pos == raw.size()) return v;
        }
    } catch (const std::exception&) {
    }
    throw TomlError("line " + std::to_string(line_no) + ": cannot parse value '" + raw + "'");
}

json toml_to_json(const std::string& text) {
    json root = json::object();
    json* table = &root;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw TomlError("line " + std::to_string(line_no) + ": malformed table header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            table = &root;
            std::stringstream parts(name);
            std::string part;
            while (std::getline(parts, part, '.')) {
                part = trim(part);
                if (part.empty())
                    throw TomlError("line " + std::to_string(line_no) + ": empty table name");
                table = &(*table)[part];
                if (!table->is_object()) *table = json::object();
            }
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw TomlError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw TomlError("line " + std::to_string(line_no) + ": empty key");
        (*table)[key] = parse_toml_value(trim(line.substr(eq + 1)), line_no);
    }
    return root;
}

// ---- schema walking -----------------------------------------------------

struct Collector {
    std::vector<std::string> violations;
    void add(const std::string& s) { violations.push_back(s); }
    bool ok() const { return violations.empty(); }
};

void reject_unknown(const json& j, const std::string& where,
                    std::initializer_list<const char*> allowed, Collector& col) {
    for (const auto& [key, _] : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end())
            col.add(where + ": unknown key '" + key + "'");
    }
}

bool expect_object(const json& j, const std::string& where, Collector& col) {
    if (!j.is_object()) {
        col.add(where + ": expected a table/object");
        return false;
    }
    return true;
}

std::optional<double> get_number(const json& j, const char* key, const std::string& where,
                                 Collector& col) {
    if (!j.contains(key)) return std::nullopt;
    if (!j.at(key).is_number()) {
        col.add(where + "." + key + ": expected a number");
        return std::nullopt;
    }
    return j.at(key).get<double>();
}

std::optional<int> get_int(const json& j, const char* key, const std::string& where,
                           Collector& col) {
    if (!j.contains(key)) return std::nullopt;
    if (!j.at(key).is_number_integer()) {
        col.add(where + "." + key + ": expected an integer");
        return std::nullopt;
    }
    return j.at(key).get<int>();
}

std::optional<bool> get_bool(const json& j, const char* key, const std::string& where,
                             Collector& col) {
    if (!j.contains(key)) return std::nullopt;
    if (!j.at(key).is_boolean()) {
        col.add(where + "." + key + ": expected a boolean");
        return std::nullopt;
    }
    return j.at(key).get<bool>();
}

std::optional<std::string> get_string(const json& j, const char* key, const std::string& where,
                                      Collector& col) {
    if (!j.contains(key)) return std::nullopt;
    if (!j.at(key).is_string()) {
        col.add(where + "." + key + ": expected a string");
        return std::nullopt;
    }
    return j.at(key).get<std::string>();
}

std::optional<std::vector<double>> get_number_array(const json& j, const char* key,
                                                    const std::string& where, Collector& col) {
    if (!j.contains(key)) return std::nullopt;
    if (!j.at(key).is_array()) {
        col.add(where + "." + key + ": expected an array of numbers");
        return std::nullopt;
    }
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) {
            col.add(where + "." + key + ": expected an array of numbers");
            return std::nullopt;
        }
        out.push_back(v.get<double>());
    }
    return out;
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

GridSection parse_grid(const json& j, const std::string& where, Collector& col) {
    GridSection g;
    if (!expect_object(j, where, col)) return g;
    reject_unknown(j, where, {"length", "n"}, col);
    bool have_length = false;
    if (auto v = get_number(j, "length", where, col)) {
        g.length = *v;
        have_length = true;
    } else {
        col.add(where + ".length: required");
    }
    if (auto v = get_int(j, "n", where, col)) g.n = *v;
    else col.add(where + ".n: required");
    if (have_length && g.length <= 0.0) col.add(where + ".length: must be positive");
    if (g.n != 0 && (g.n < 8 || !power_of_two(g.n)))
        col.add(where + ".n: must be a power of two, n >= 8");
    return g;
}

CouplingSection parse_coupling(const json& j, Collector& col) {
    CouplingSection c;
    const std::string where = "coupling";
    if (!expect_object(j, where, col)) return c;
    reject_unknown(j, where, {"weights", "s1", "s2", "mnls"}, col);
    if (auto v = get_number_array(j, "weights", where, col)) c.weights = *v;
    else col.add(where + ".weights: required");
    c.s1 = get_number(j, "s1", where, col);
    c.s2 = get_number(j, "s2", where, col);
    if (auto v = get_bool(j, "mnls", where, col)) c.mnls = *v;

    if (c.weights.empty() && col.ok()) col.add(where + ".weights: must be nonempty");
    for (double w : c.weights)
        if (std::abs(w) < 1e-14) col.add(where + ".weights: weights must be nonzero");
    if (c.mnls && (c.s1 || c.s2))
        col.add(where + ": give either mnls = true or explicit s1/s2, not both");
    if (!c.mnls && (!c.s1 || !c.s2))
        col.add(where + ": either mnls = true or both s1 and s2 are required");
    if (c.s2 && !c.weights.empty()) {
        double wsum = 0.0;
        for (double w : c.weights) wsum += w;
        if (std::abs(1.0 - *c.s2 * wsum) < 1e-12)
            col.add(where + ".s2: equals (sum w)^-1, which makes L a rank-1 matrix");
    }
    return c;
}

EnsembleSection parse_ensemble(const json& j, Collector& col) {
    EnsembleSection e;
    const std::string where = "ensemble";
    if (!expect_object(j, where, col)) return e;
    reject_unknown(j, where, {"rho0", "g", "h"}, col);
    if (auto v = get_number_array(j, "rho0", where, col)) e.rho0 = *v;
    else col.add(where + ".rho0: required");
    if (auto v = get_number_array(j, "g", where, col)) e.g = *v;
    else col.add(where + ".g: required");
    if (auto v = get_number(j, "h", where, col)) e.h = *v;
    else col.add(where + ".h: required");

    if (!e.rho0.empty() && e.rho0.size() != e.g.size())
        col.add(where + ": rho0 and g must have equal length");
    for (double r : e.rho0)
        if (r <= 0.0) col.add(where + ".rho0: densities must be positive");
    for (double gi : e.g)
        if (gi <= 0.0) col.add(where + ".g: self-couplings must be positive");
    if (e.h <= 0.0) col.add(where + ".h: must be positive");
    if (!e.g.empty() && e.h >= *std::min_element(e.g.begin(), e.g.end()))
        col.add(where + ": stability requires h < min g_j");
    return e;
}

DegenerateSection parse_degenerate(const json& j, Collector& col) {
    DegenerateSection d;
    const std::string where = "degenerate";
    if (!expect_object(j, where, col)) return d;
    reject_unknown(j, where, {"lambda_star", "h", "rho_ref", "weights", "extras"}, col);
    if (auto v = get_number(j, "lambda_star", where, col)) d.lambda_star = *v;
    else col.add(where + ".lambda_star: required");
    if (auto v = get_number(j, "h", where, col)) d.h = *v;
    else col.add(where + ".h: required");
    if (auto v = get_number(j, "rho_ref", where, col)) d.rho_ref = *v;
    if (auto v = get_number_array(j, "weights", where, col)) d.weights = *v;
    else col.add(where + ".weights: required");
    if (j.contains("extras")) {
        if (!j.at("extras").is_array()) {
            col.add(where + ".extras: expected an array of [rho0, g] pairs");
        } else {
            for (const auto& p : j.at("extras")) {
                if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
                    col.add(where + ".extras: expected an array of [rho0, g] pairs");
                    break;
                }
                d.extras.emplace_back(p[0].get<double>(), p[1].get<double>());
            }
        }
    }
    if (d.lambda_star <= 0.0) col.add(where + ".lambda_star: must be positive");
    if (d.h <= 0.0) col.add(where + ".h: must be positive");
    if (d.rho_ref <= 0.0) col.add(where + ".rho_ref: must be positive");
    for (double w : d.weights)
        if (w <= 0.0) col.add(where + ".weights: density ratios must be positive");
    return d;
}

ProfileSpec parse_profile(const json& j, const std::string& where, Collector& col) {
    ProfileSpec p;
    if (!expect_object(j, where, col)) return p;
    reject_unknown(j, where, {"profile", "kappa", "amplitude", "sigma", "x0", "path", "column"},
                   col);
    if (auto v = get_string(j, "profile", where, col)) p.type = *v;
    else col.add(where + ".profile: required (soliton | gaussian | dipole | from_file)");
    if (auto v = get_number(j, "kappa", where, col)) p.kappa = *v;
    if (auto v = get_number(j, "amplitude", where, col)) p.amplitude = *v;
    if (auto v = get_number(j, "sigma", where, col)) p.sigma = *v;
    if (auto v = get_number(j, "x0", where, col)) p.x0 = *v;
    if (auto v = get_string(j, "path", where, col)) p.path = *v;
    if (auto v = get_int(j, "column", where, col)) p.column = *v;

    if (!p.type.empty() && p.type != "soliton" && p.type != "gaussian" && p.type != "dipole" &&
        p.type != "from_file")
        col.add(where + ".profile: unknown profile '" + p.type + "'");
    if (p.type == "from_file" && p.path.empty()) col.add(where + ".path: required for from_file");
    if ((p.type == "gaussian" || p.type == "dipole") && p.sigma <= 0.0)
        col.add(where + ".sigma: must be positive");
    return p;
}

std::vector<ProfileSpec> parse_profile_list(const json& j, const std::string& where,
                                            Collector& col) {
    std::vector<ProfileSpec> out;
    if (j.is_array()) {
        int idx = 0;
        for (const auto& e : j) out.push_back(parse_profile(e, where + "[" + std::to_string(idx++) + "]", col));
    } else {
        out.push_back(parse_profile(j, where, col));
    }
    return out;
}

PerturbationSection parse_perturbation(const json& j, Collector& col) {
    PerturbationSection p;
    const std::string where = "initial.perturbation";
    if (!expect_object(j, where, col)) return p;
    reject_unknown(j, where, {"epsilon", "slow_grid", "f0"}, col);
    if (auto v = get_number(j, "epsilon", where, col)) p.epsilon = *v;
    else col.add(where + ".epsilon: required");
    if (j.contains("slow_grid")) p.slow_grid = parse_grid(j.at("slow_grid"), where + ".slow_grid", col);
    else col.add(where + ".slow_grid: required");
    if (j.contains("f0")) p.f0 = parse_profile_list(j.at("f0"), where + ".f0", col);
    else col.add(where + ".f0: required");
    if (p.epsilon <= 0.0 || p.epsilon > 0.5)
        col.add(where + ".epsilon: must lie in (0, 0.5]");
    return p;
}

InitialSection parse_initial(const json& j, Collector& col) {
    InitialSection ini;
    const std::string where = "initial";
    if (j.is_array()) {
        ini.profiles = parse_profile_list(j, where, col);
        return ini;
    }
    if (!expect_object(j, where, col)) return ini;
    if (j.contains("profile")) {
        ini.profiles = parse_profile_list(j, where, col);
        return ini;
    }
    reject_unknown(j, where, {"plane_wave", "theta_bar", "perturbation", "profiles"}, col);
    if (auto v = get_bool(j, "plane_wave", where, col)) ini.plane_wave = *v;
    if (auto v = get_number_array(j, "theta_bar", where, col)) ini.theta_bar = *v;
    if (j.contains("profiles")) ini.profiles = parse_profile_list(j.at("profiles"), where + ".profiles", col);
    if (j.contains("perturbation")) ini.perturbation = parse_perturbation(j.at("perturbation"), col);
    if (!ini.plane_wave && ini.profiles.empty())
        col.add(where + ": needs profiles or plane_wave = true");
    return ini;
}

IntegrateSection parse_integrate(const json& j, Collector& col) {
    IntegrateSection s;
    const std::string where = "integrate";
    if (!expect_object(j, where, col)) return s;
    reject_unknown(j, where, {"dt", "t_final", "tau_final", "snapshot_stride"}, col);
    s.dt = get_number(j, "dt", where, col);
    s.t_final = get_number(j, "t_final", where, col);
    s.tau_final = get_number(j, "tau_final", where, col);
    if (auto v = get_int(j, "snapshot_stride", where, col)) s.snapshot_stride = *v;
    if (s.dt && *s.dt <= 0.0) col.add(where + ".dt: must be positive");
    if (s.snapshot_stride < 0) col.add(where + ".snapshot_stride: must be >= 0");
    return s;
}

ReduceSection parse_reduce(const json& j, Collector& col) {
    ReduceSection r;
    const std::string where = "reduce";
    if (!expect_object(j, where, col)) return r;
    reject_unknown(j, where,
                   {"epsilons", "tau_final", "l0", "points_per_slow_unit", "fast_n",
                    "mnls_dt_coeff", "mnls_dt_power", "kdv_dt"},
                   col);
    if (auto v = get_number_array(j, "epsilons", where, col)) r.epsilons = *v;
    if (auto v = get_number(j, "tau_final", where, col)) r.tau_final = *v;
    if (auto v = get_number(j, "l0", where, col)) r.l0 = *v;
    if (auto v = get_int(j, "points_per_slow_unit", where, col)) r.points_per_slow_unit = *v;
    if (auto v = get_int(j, "fast_n", where, col)) r.fast_n = *v;
    if (auto v = get_number(j, "mnls_dt_coeff", where, col)) r.mnls_dt_coeff = *v;
    if (auto v = get_number(j, "mnls_dt_power", where, col)) r.mnls_dt_power = *v;
    if (auto v = get_number(j, "kdv_dt", where, col)) r.kdv_dt = *v;
    for (double e : r.epsilons)
        if (e <= 0.0 || e > 0.5) col.add(where + ".epsilons: values must lie in (0, 0.5]");
    if (r.tau_final <= 0.0) col.add(where + ".tau_final: must be positive");
    if (r.l0 <= 0.0) col.add(where + ".l0: must be positive");
    return r;
}

OutputSection parse_output(const json& j, Collector& col) {
    OutputSection o;
    const std::string where = "output";
    if (!expect_object(j, where, col)) return o;
    reject_unknown(j, where, {"directory"}, col);
    if (auto v = get_string(j, "directory", where, col)) o.directory = *v;
    return o;
}

RunConfig from_json(const json& root) {
    Collector col;
    RunConfig cfg;
    if (!root.is_object()) throw SchemaError({"top level: expected a table/object"});
    reject_unknown(root, "top level",
                   {"grid", "coupling", "ensemble", "degenerate", "initial", "integrate",
                    "reduce", "output"},
                   col);
    if (root.contains("grid")) cfg.grid = parse_grid(root.at("grid"), "grid", col);
    if (root.contains("coupling")) cfg.coupling = parse_coupling(root.at("coupling"), col);
    if (root.contains("ensemble")) cfg.ensemble = parse_ensemble(root.at("ensemble"), col);
    if (root.contains("degenerate")) cfg.degenerate = parse_degenerate(root.at("degenerate"), col);
    if (root.contains("initial")) cfg.initial = parse_initial(root.at("initial"), col);
    if (root.contains("integrate")) cfg.integrate = parse_integrate(root.at("integrate"), col);
    if (root.contains("reduce")) cfg.reduce = parse_reduce(root.at("reduce"), col);
    if (root.contains("output")) cfg.output = parse_output(root.at("output"), col);
    if (!col.ok()) throw SchemaError(std::move(col.violations));

    // fill the step-size default from the stability guideline once the grid
    // is known
    if (cfg.integrate && !cfg.integrate->dt && cfg.grid)
        cfg.integrate->dt = guideline_dt(PeriodicGrid{cfg.grid->length, cfg.grid->n});
    return cfg;
}

} // namespace

RunConfig parse_config(const std::string& text, ConfigFormat fmt) {
    json root;
    if (fmt == ConfigFormat::Json) {
        try {
            root = json::parse(text);
        } catch (const json::exception& e) {
            throw SchemaError({std::string("JSON parse error: ") + e.what()});
        }
    } else {
        try {
            root = toml_to_json(text);
        } catch (const TomlError& e) {
            throw SchemaError({std::string("TOML parse error: ") + e.what()});
        }
    }
    return from_json(root);
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    ConfigFormat fmt;
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
        fmt = ConfigFormat::Json;
    else if (path.size() >= 5 && path.substr(path.size() - 5) == ".toml")
        fmt = ConfigFormat::Toml;
    else
        throw Error("config file must end in .json or .toml: " + path);
    return parse_config(ss.str(), fmt);
}

} // namespace ckdv
