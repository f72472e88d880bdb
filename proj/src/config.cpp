#include "dualvar/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dualvar {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void bad_value(const std::string& key, int line, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line) + ": key '" + key + "': " + what);
}

double parse_double(const std::string& key, const std::string& value, int line) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &used);
    } catch (const std::exception&) {
        bad_value(key, line, "expected a number, got '" + value + "'");
    }
    if (used != value.size()) bad_value(key, line, "trailing characters in '" + value + "'");
    return out;
}

long long parse_int(const std::string& key, const std::string& value, int line) {
    std::size_t used = 0;
    long long out = 0;
    try {
        out = std::stoll(value, &used);
    } catch (const std::exception&) {
        bad_value(key, line, "expected an integer, got '" + value + "'");
    }
    if (used != value.size()) bad_value(key, line, "trailing characters in '" + value + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value, int line) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    bad_value(key, line, "expected true/false/1/0, got '" + value + "'");
}

CoefficientFamily::Kind parse_kind(const std::string& key, const std::string& value, int line) {
    try {
        return coefficient_kind_from_name(value);
    } catch (const std::exception& e) {
        bad_value(key, line, e.what());
    }
}

std::uint64_t parse_seed(const std::string& key, const std::string& value, int line) {
    std::size_t used = 0;
    unsigned long long out = 0;
    try {
        out = std::stoull(value, &used);
    } catch (const std::exception&) {
        bad_value(key, line, "expected a nonnegative integer, got '" + value + "'");
    }
    if (used != value.size() || value.find('-') != std::string::npos)
        bad_value(key, line, "expected a nonnegative integer, got '" + value + "'");
    return out;
}

void apply(RunConfig& cfg, const std::string& key, const std::string& value, int line) {
    if (key == "problem.N") cfg.problem.N = static_cast<int>(parse_int(key, value, line));
    else if (key == "problem.q") cfg.problem.q = parse_double(key, value, line);
    else if (key == "problem.s") cfg.problem.s = parse_double(key, value, line);
    else if (key == "problem.k.kind") cfg.problem.k.kind = parse_kind(key, value, line);
    else if (key == "problem.k.amplitude") cfg.problem.k.amplitude = parse_double(key, value, line);
    else if (key == "problem.k.decay") cfg.problem.k.decay = parse_double(key, value, line);
    else if (key == "problem.h.kind") cfg.problem.h.kind = parse_kind(key, value, line);
    else if (key == "problem.h.amplitude") cfg.problem.h.amplitude = parse_double(key, value, line);
    else if (key == "problem.h.decay") cfg.problem.h.decay = parse_double(key, value, line);
    else if (key == "grid.R") cfg.grid_R = parse_double(key, value, line);
    else if (key == "grid.M") cfg.grid_M = static_cast<int>(parse_int(key, value, line));
    else if (key == "grid.stretch") cfg.grid_stretch = parse_double(key, value, line);
    else if (key == "solver.grad_tol") cfg.solver.grad_tol = parse_double(key, value, line);
    else if (key == "solver.max_iters") cfg.solver.max_iters = static_cast<int>(parse_int(key, value, line));
    else if (key == "solver.armijo_c") cfg.solver.armijo_c = parse_double(key, value, line);
    else if (key == "solver.backtrack_ratio") cfg.solver.backtrack_ratio = parse_double(key, value, line);
    else if (key == "solver.memory") cfg.solver.memory = static_cast<int>(parse_int(key, value, line));
    else if (key == "solver.sobolev") cfg.solver.sobolev = parse_bool(key, value, line);
    else if (key == "solver.enforce_nonnegative") cfg.solver.enforce_nonnegative = parse_bool(key, value, line);
    else if (key == "geometry.n_max") cfg.geometry_n_max = static_cast<int>(parse_int(key, value, line));
    else if (key == "geometry.samples") cfg.geometry_samples = static_cast<int>(parse_int(key, value, line));
    else if (key == "geometry.starts") cfg.geometry_starts = static_cast<int>(parse_int(key, value, line));
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "seed") cfg.seed = parse_seed(key, value, line);
    else throw ConfigError("config line " + std::to_string(line) + ": unknown key '" + key + "'");
}

} // namespace

void RunConfig::validate() const {
    try {
        problem.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("problem.*: ") + e.what());
    }
    try {
        solver.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("solver.*: ") + e.what());
    }
    if (!(grid_R > 0.0)) throw ConfigError("grid.R: must be positive");
    if (grid_M < 16) throw ConfigError("grid.M: must be >= 16");
    if (!(grid_stretch >= 1.0)) throw ConfigError("grid.stretch: must be >= 1");
    if (geometry_n_max < 1) throw ConfigError("geometry.n_max: must be >= 1");
    if (geometry_n_max > grid_M / 8)
        throw ConfigError("geometry.n_max: exceeds grid.M / 8, bumps unresolvable");
    if (geometry_samples < 100) throw ConfigError("geometry.samples: must be >= 100");
    if (geometry_starts < 1) throw ConfigError("geometry.starts: must be >= 1");
    if (output_dir.empty()) throw ConfigError("output_dir: must not be empty");
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line) +
                              ": expected 'key = value', got '" + stripped + "'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(line) + ": empty key");
        if (value.empty())
            throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                              "': empty value");
        apply(cfg, key, value, line);
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace dualvar
