#pragma once

#include <string>

namespace dualvar {

/// Executes one batch subcommand end to end: parses the config (defaults
/// when config_path is empty), builds the model, runs the requested stages,
/// and writes artifacts into the output directory (env DUALVAR_OUTPUT
/// overrides output_dir). Always writes report.json; ground-state also
/// writes u.csv and v.csv, multi-solutions writes one r,v,u file per
/// distinct solution, check-geometry writes geometry.csv.
///
/// subcommands: verify-transform, check-geometry, ground-state,
/// multi-solutions, check-all.
///
/// Returns the process exit status: 0 when every check passed, 1 when a
/// check failed (stdout carries a JSON summary naming the failed property),
/// 2 on a configuration error (stderr names the offending path or key).
int run_subcommand(const std::string& subcommand, const std::string& config_path);

} // namespace dualvar
