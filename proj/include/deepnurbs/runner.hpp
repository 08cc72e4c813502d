#pragma once

#include <string>

#include "deepnurbs/config.hpp"

namespace dn {

/// Runs training per config and writes metadata, history CSV, metrics,
/// solution grid, checkpoint, and (optionally) a sample dump under
/// config.output_dir. Returns the process exit status.
int run_experiment(const RunConfig& config);

/// Side-by-side metric comparison of two completed run directories on the
/// same problem; writes comparison.csv into dir_a and prints the table.
int compare_runs(const std::string& dir_a, const std::string& dir_b);

/// Dry-run checks for a config: admissibility, geometry area / membership
/// sampling, manufactured-solution consistency.
int validate_run(const RunConfig& config);

/// Checkpoint round trip (flat parameter array plus architecture header).
void save_checkpoint(const MLPParams& params, std::uint64_t seed, const std::string& path);
MLPParams load_checkpoint(const std::string& path);

}  // namespace dn
