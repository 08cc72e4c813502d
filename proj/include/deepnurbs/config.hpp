#pragma once

#include <string>

#include "deepnurbs/problems.hpp"
#include "deepnurbs/solver.hpp"

namespace dn {

/// Full run description parsed from a flat key = value config file.
struct RunConfig {
  std::string problem;          // builtin name, or empty when inline geometry is used
  std::string geometry_file;    // inline problem: serialized ControlNet
  double source_constant = 1.0; // inline problem source f
  std::vector<Edge> inline_dirichlet_edges;
  SolverConfig solver;
  std::string output_dir = "out";
  bool dump_samples = false;

  /// Builds the problem this run targets (builtin or inline).
  ProblemSpec make_problem() const;
};

/// Parses the documented flat key = value format. Unknown keys, malformed
/// values, and invariant violations raise ParseError / ValidationError with
/// the offending line or field.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Emits a config file that parses back to an equivalent RunConfig.
std::string config_echo(const RunConfig& config);

/// Plain structured text form of a ControlNet (dimension, per-direction
/// degree and knots, row-major point and weight grids).
void save_control_net(const ControlNet& net, const std::string& path);
ControlNet load_control_net(const std::string& path);

}  // namespace dn
