#pragma once

#include "dualvar/problem.hpp"
#include "dualvar/solve.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dualvar {

/// unreadable file, unknown key, malformed value, or a value rejected by
/// validation; what() names the offending path or key
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// One batch run, assembled from a flat `key = value` file. Every key is
/// optional; the defaults below describe the standard problem. The full key
/// list is documented in the README.
struct RunConfig {
    ProblemSpec problem;

    double grid_R = 20.0;
    int grid_M = 400;
    double grid_stretch = 1.01;   // geometric node clustering near the origin

    SolveOptions solver;

    int geometry_n_max = 4;       // subspace levels certified / searched
    int geometry_samples = 1000;  // sphere and extremum samples per level
    int geometry_starts = 3;      // minimizer launches per subspace level

    std::string output_dir = "out";
    std::uint64_t seed = 1;

    /// throws ConfigError naming the violated key
    void validate() const;
};

/// Parses `key = value` lines with dotted section prefixes
/// (problem.q = 1.5). '#' starts a comment, blank lines are skipped,
/// whitespace around keys and values is trimmed, a repeated key keeps the
/// last assignment. Unknown keys and malformed values throw ConfigError
/// naming the key and line.
RunConfig parse_config_text(const std::string& text);

/// reads the file and parses it; an unreadable path throws ConfigError
/// naming that path
RunConfig parse_config_file(const std::string& path);

} // namespace dualvar
