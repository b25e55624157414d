// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hyperred/eqp.hpp"
#include "hyperred/interp_hr.hpp"
#include "hyperred/pareto.hpp"
#include "hyperred/pod.hpp"
#include "hyperred/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace hyperred {

/// Matrix CSV: header line "# state_dim=<rows> snapshots=<cols>", then
/// one row of comma-separated values per state component (states are
/// columns). Used for snapshot data, bases, and reference states alike.
void save_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix load_matrix_csv(const std::filesystem::path& path);

/// One value per line.
void save_vector_csv(const std::filesystem::path& path, const Vector& v);
Vector load_vector_csv(const std::filesystem::path& path);

void save_snapshots(const std::filesystem::path& data_path,
                    const std::filesystem::path& offset_path,
                    const SnapshotMatrix& snaps);
SnapshotMatrix load_snapshots(const std::filesystem::path& data_path,
                              const std::filesystem::path& offset_path,
                              std::vector<double> time_stamps = {},
                              std::string parameter_tag = {});

/// {"indices":[...], "r_f":k, "method":"deim|qdeim_e|sopt"}
void save_sample_set(const std::filesystem::path& path, const SampleIndexSet& z,
                     const std::string& method);
SampleIndexSet load_sample_set(const std::filesystem::path& path,
                               std::string* method = nullptr);

/// {"K":n, "support":[...], "weights":[...], "tol":t, "residual":r}
/// with weights aligned to the support list.
void save_sparse_rule(const std::filesystem::path& path,
                      const SparseQuadratureRule& rule);
SparseQuadratureRule load_sparse_rule(const std::filesystem::path& path);

void save_run_record(const std::filesystem::path& path, const RunRecord& rec);
RunRecord load_run_record(const std::filesystem::path& path);

std::vector<RunRecord> load_run_records(
    const std::vector<std::filesystem::path>& paths);

}  // namespace hyperred
