// SPDX-License-Identifier: Apache-2.0

#include "hyperred/pod.hpp"

#include "hyperred/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace hyperred {

SnapshotMatrix assemble_snapshots(const std::vector<Vector>& states,
                                  OffsetMode mode,
                                  std::vector<double> time_stamps,
                                  std::string parameter_tag) {
  require(!states.empty(), "assemble_snapshots: empty state sequence");
  const Index n = states.front().size();
  for (const auto& s : states) {
    require(s.size() == n, "assemble_snapshots: state length mismatch");
    require_finite(s, "assemble_snapshots");
  }

  SnapshotMatrix out;
  switch (mode) {
    case OffsetMode::zero:
      out.offset = Vector::Zero(n);
      break;
    case OffsetMode::first_snapshot:
      out.offset = states.front();
      break;
    case OffsetMode::mean: {
      out.offset = Vector::Zero(n);
      for (const auto& s : states) out.offset += s;
      out.offset /= static_cast<double>(states.size());
      break;
    }
  }

  out.data.resize(n, static_cast<Index>(states.size()));
  for (Index j = 0; j < out.data.cols(); ++j) {
    out.data.col(j) = states[static_cast<size_t>(j)] - out.offset;
  }
  if (time_stamps.empty()) {
    time_stamps.resize(states.size(), 0.0);
  }
  require(time_stamps.size() == states.size(),
          "assemble_snapshots: time stamp count mismatch");
  out.time_stamps = std::move(time_stamps);
  out.parameter_tags.assign(states.size(), parameter_tag);
  return out;
}

SnapshotMatrix merge_snapshots(const std::vector<SnapshotMatrix>& sets) {
  require(!sets.empty(), "merge_snapshots: no snapshot sets");
  const Index n = sets.front().state_dim();
  Index cols = 0;
  for (const auto& s : sets) {
    require(s.state_dim() == n, "merge_snapshots: state dimension mismatch");
    cols += s.n_snapshots();
  }

  SnapshotMatrix out;
  out.offset = sets.front().offset;
  out.data.resize(n, cols);
  Index at = 0;
  for (const auto& s : sets) {
    for (Index j = 0; j < s.n_snapshots(); ++j) {
      out.data.col(at++) = (s.data.col(j) + s.offset) - out.offset;
    }
    out.time_stamps.insert(out.time_stamps.end(), s.time_stamps.begin(),
                           s.time_stamps.end());
    out.parameter_tags.insert(out.parameter_tags.end(),
                              s.parameter_tags.begin(),
                              s.parameter_tags.end());
  }
  return out;
}

std::pair<Matrix, Vector> compute_basis(const SnapshotMatrix& x) {
  require(x.data.size() > 0, "compute_basis: empty snapshot matrix");
  const SvdResult svd = thin_svd(x.data);
  return {svd.u, svd.sigma};
}

EnergyReport energy_residual(const Vector& sigma, Index r) {
  require(r >= 0 && r <= sigma.size(), "energy_residual: r out of range");
  EnergyReport rep;
  rep.r = r;
  for (Index i = 0; i < sigma.size(); ++i) {
    require(sigma(i) >= 0.0, "energy_residual: negative singular value");
    rep.e_tot += sigma(i) * sigma(i);
    if (i < r) rep.e_c += sigma(i) * sigma(i);
  }
  require(rep.e_tot > 0.0, "energy_residual: zero spectrum");
  const double frac = 1.0 - rep.e_c / rep.e_tot;
  rep.e_r = frac <= 1e-16 ? 16.0 : std::min(16.0, -std::log10(frac));
  return rep;
}

Index truncate_for_energy(const Vector& sigma, double target_e_r) {
  require(target_e_r > 0.0, "truncate_for_energy: target must be > 0");
  for (Index r = 1; r <= sigma.size(); ++r) {
    if (energy_residual(sigma, r).e_r >= target_e_r) return r;
  }
  return sigma.size();
}

ReducedBasis make_reduced_basis(const SnapshotMatrix& x, Index r) {
  auto [u, sigma] = compute_basis(x);
  require(r >= 1 && r <= u.cols(), "make_reduced_basis: r out of range");
  ReducedBasis out;
  out.basis = u.leftCols(r);
  out.singular_values = sigma;
  out.offset = x.offset;
  out.retained = r;
  return out;
}

ReducedBasis make_reduced_basis_for_energy(const SnapshotMatrix& x,
                                           double target_e_r) {
  auto [u, sigma] = compute_basis(x);
  const Index r = truncate_for_energy(sigma, target_e_r);
  ReducedBasis out;
  out.basis = u.leftCols(r);
  out.singular_values = sigma;
  out.offset = x.offset;
  out.retained = r;
  return out;
}

ReducedBasis augment_with_constant(const ReducedBasis& in) {
  const Index n = in.basis.rows();
  const Vector c = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));

  Matrix work(n, in.basis.cols() + 1);
  work.col(0) = c;
  Index cols = 1;
  for (Index j = 0; j < in.basis.cols(); ++j) {
    Vector v = in.basis.col(j);
    // Two rounds of Gram-Schmidt against the accepted columns.
    for (int round = 0; round < 2; ++round) {
      for (Index k = 0; k < cols; ++k) {
        v -= work.col(k).dot(v) * work.col(k);
      }
    }
    const double nv = v.norm();
    if (nv > 1e-10) {
      work.col(cols++) = v / nv;
    }
  }

  ReducedBasis out = in;
  out.basis = work.leftCols(cols);
  out.retained = cols;
  return out;
}

ReducedBasis stack_field_bases(const std::vector<ReducedBasis>& fields) {
  require(!fields.empty(), "stack_field_bases: no fields");
  Index n = 0;
  Index r = 0;
  for (const auto& f : fields) {
    n += f.basis.rows();
    r += f.retained;
  }

  ReducedBasis out;
  out.basis = Matrix::Zero(n, r);
  out.offset = Vector::Zero(n);
  Index row = 0;
  Index col = 0;
  std::vector<double> spectrum;
  for (const auto& f : fields) {
    out.basis.block(row, col, f.basis.rows(), f.retained) =
        f.basis.leftCols(f.retained);
    out.offset.segment(row, f.offset.size()) = f.offset;
    for (Index i = 0; i < f.singular_values.size(); ++i) {
      spectrum.push_back(f.singular_values(i));
    }
    row += f.basis.rows();
    col += f.retained;
  }
  std::sort(spectrum.rbegin(), spectrum.rend());
  out.singular_values =
      Eigen::Map<const Vector>(spectrum.data(), static_cast<Index>(spectrum.size()));
  out.retained = r;
  return out;
}

}  // namespace hyperred
