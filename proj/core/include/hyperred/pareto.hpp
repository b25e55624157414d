// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hyperred/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace hyperred {

/// One online run: the (time, error) tuple plus its configuration.
struct RunRecord {
  std::string problem;
  std::string method;   // deim | qdeim_e | sopt | eqp | none
  double er_target = 0.0;
  Index r_y = 0;
  Index n_points = 0;   // n_f for interpolation, K* for eqp, 0 for none
  Index sample_mesh_elements = 0;
  std::map<std::string, double> field_errors;
  double combined_error = 0.0;
  double relative_online_time = 0.0;
  std::string mode;     // reproductive | predictive
  std::string solver;   // backward_euler | rk4
  std::string norm;     // euclidean | mass
  Index n_windows = 1;
  std::string config_hash;

  // Wall-time measurements behind relative_online_time; excluded from
  // determinism comparisons.
  std::vector<double> online_seconds;
  double fom_seconds = 0.0;
};

struct ParetoSet {
  std::vector<RunRecord> records;
  std::vector<Index> front;  // indices into records, mutually non-dominated
};

/// Non-dominated set under (relative_online_time, combined_error), both
/// minimized. A record is dominated when another is no worse in both
/// objectives and strictly better in at least one; exact duplicates are
/// all kept.
ParetoSet pareto_extract(std::vector<RunRecord> records);

}  // namespace hyperred
