// SPDX-License-Identifier: Apache-2.0

#include "hyperred/io.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace hyperred {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return in;
}

json read_json(const std::filesystem::path& path) {
  auto in = open_in(path);
  json j;
  in >> j;
  return j;
}

}  // namespace

void save_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  auto out = open_out(path);
  out << "# state_dim=" << m.rows() << " snapshots=" << m.cols() << "\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      out << m(i, j) << (j + 1 < m.cols() ? "," : "");
    }
    out << "\n";
  }
}

Matrix load_matrix_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string header;
  std::getline(in, header);
  Index rows = 0, cols = 0;
  if (std::sscanf(header.c_str(), "# state_dim=%td snapshots=%td", &rows,
                  &cols) != 2) {
    throw std::runtime_error("bad matrix CSV header in " + path.string());
  }
  Matrix m(rows, cols);
  std::string line;
  for (Index i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) {
      throw std::runtime_error("truncated matrix CSV " + path.string());
    }
    std::stringstream ss(line);
    std::string cell;
    for (Index j = 0; j < cols; ++j) {
      if (!std::getline(ss, cell, ',')) {
        throw std::runtime_error("short row in matrix CSV " + path.string());
      }
      m(i, j) = std::stod(cell);
    }
  }
  return m;
}

void save_vector_csv(const std::filesystem::path& path, const Vector& v) {
  auto out = open_out(path);
  for (Index i = 0; i < v.size(); ++i) out << v(i) << "\n";
}

Vector load_vector_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<double> vals;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) vals.push_back(std::stod(line));
  }
  return Eigen::Map<const Vector>(vals.data(), static_cast<Index>(vals.size()));
}

void save_snapshots(const std::filesystem::path& data_path,
                    const std::filesystem::path& offset_path,
                    const SnapshotMatrix& snaps) {
  save_matrix_csv(data_path, snaps.data);
  save_vector_csv(offset_path, snaps.offset);
}

SnapshotMatrix load_snapshots(const std::filesystem::path& data_path,
                              const std::filesystem::path& offset_path,
                              std::vector<double> time_stamps,
                              std::string parameter_tag) {
  SnapshotMatrix s;
  s.data = load_matrix_csv(data_path);
  s.offset = load_vector_csv(offset_path);
  require(s.offset.size() == s.data.rows(), "load_snapshots: offset length");
  if (time_stamps.empty()) time_stamps.resize(s.data.cols(), 0.0);
  require(static_cast<Index>(time_stamps.size()) == s.data.cols(),
          "load_snapshots: time stamp count");
  s.time_stamps = std::move(time_stamps);
  s.parameter_tags.assign(s.data.cols(), parameter_tag);
  return s;
}

void save_sample_set(const std::filesystem::path& path, const SampleIndexSet& z,
                     const std::string& method) {
  json j;
  j["indices"] = z.indices;
  j["r_f"] = z.source_basis_cols;
  j["method"] = method;
  open_out(path) << j.dump(2) << "\n";
}

SampleIndexSet load_sample_set(const std::filesystem::path& path,
                               std::string* method) {
  const json j = read_json(path);
  SampleIndexSet z;
  z.indices = j.at("indices").get<std::vector<Index>>();
  z.source_basis_cols = j.at("r_f").get<Index>();
  if (method != nullptr) *method = j.at("method").get<std::string>();
  return z;
}

void save_sparse_rule(const std::filesystem::path& path,
                      const SparseQuadratureRule& rule) {
  json j;
  j["K"] = rule.weights.size();
  j["support"] = rule.support;
  std::vector<double> w;
  w.reserve(rule.support.size());
  for (Index k : rule.support) w.push_back(rule.weights(k));
  j["weights"] = w;
  j["tol"] = rule.tolerance_used;
  j["residual"] = rule.achieved_residual;
  j["converged"] = rule.converged;
  j["capped"] = rule.capped;
  open_out(path) << j.dump(2) << "\n";
}

SparseQuadratureRule load_sparse_rule(const std::filesystem::path& path) {
  const json j = read_json(path);
  SparseQuadratureRule rule;
  rule.weights = Vector::Zero(j.at("K").get<Index>());
  rule.support = j.at("support").get<std::vector<Index>>();
  const auto w = j.at("weights").get<std::vector<double>>();
  require(w.size() == rule.support.size(), "load_sparse_rule: weight count");
  for (size_t i = 0; i < w.size(); ++i) rule.weights(rule.support[i]) = w[i];
  rule.k_star = static_cast<Index>(rule.support.size());
  rule.tolerance_used = j.at("tol").get<double>();
  rule.achieved_residual = j.at("residual").get<double>();
  rule.converged = j.value("converged", true);
  rule.capped = j.value("capped", false);
  return rule;
}

void save_run_record(const std::filesystem::path& path, const RunRecord& rec) {
  json j;
  j["problem"] = rec.problem;
  j["method"] = rec.method;
  j["er_target"] = rec.er_target;
  j["r_y"] = rec.r_y;
  j["n_points"] = rec.n_points;
  j["sample_mesh_elements"] = rec.sample_mesh_elements;
  j["field_errors"] = rec.field_errors;
  j["combined_error"] = rec.combined_error;
  j["relative_online_time"] = rec.relative_online_time;
  j["mode"] = rec.mode;
  j["solver"] = rec.solver;
  j["norm"] = rec.norm;
  j["n_windows"] = rec.n_windows;
  j["config_hash"] = rec.config_hash;
  j["online_seconds"] = rec.online_seconds;
  j["fom_seconds"] = rec.fom_seconds;
  open_out(path) << j.dump(2) << "\n";
}

RunRecord load_run_record(const std::filesystem::path& path) {
  const json j = read_json(path);
  RunRecord rec;
  rec.problem = j.at("problem").get<std::string>();
  rec.method = j.at("method").get<std::string>();
  rec.er_target = j.at("er_target").get<double>();
  rec.r_y = j.at("r_y").get<Index>();
  rec.n_points = j.at("n_points").get<Index>();
  rec.sample_mesh_elements = j.at("sample_mesh_elements").get<Index>();
  rec.field_errors = j.at("field_errors").get<std::map<std::string, double>>();
  rec.combined_error = j.at("combined_error").get<double>();
  rec.relative_online_time = j.at("relative_online_time").get<double>();
  rec.mode = j.at("mode").get<std::string>();
  rec.solver = j.at("solver").get<std::string>();
  rec.norm = j.value("norm", "euclidean");
  rec.n_windows = j.value("n_windows", Index{1});
  rec.config_hash = j.value("config_hash", "");
  rec.online_seconds = j.value("online_seconds", std::vector<double>{});
  rec.fom_seconds = j.value("fom_seconds", 0.0);
  return rec;
}

std::vector<RunRecord> load_run_records(
    const std::vector<std::filesystem::path>& paths) {
  std::vector<RunRecord> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(load_run_record(p));
  return out;
}

}  // namespace hyperred
