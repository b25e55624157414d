// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hyperred/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace hyperred {

enum class OffsetMode { zero, first_snapshot, mean };

/// Column-stacked states minus a common offset.
struct SnapshotMatrix {
  Matrix data;    // state_dim x n_snapshots, already offset-subtracted
  Vector offset;  // length state_dim
  std::vector<double> time_stamps;         // nondecreasing per parameter tag
  std::vector<std::string> parameter_tags; // one per snapshot

  Index state_dim() const { return data.rows(); }
  Index n_snapshots() const { return data.cols(); }
};

struct ReducedBasis {
  Matrix basis;           // state_dim x retained, orthonormal columns
  Vector singular_values; // full spectrum of the snapshot matrix
  Vector offset;
  Index retained = 0;
};

struct EnergyReport {
  double e_tot = 0.0;  // sum of squared singular values
  double e_c = 0.0;    // captured by the first r
  double e_r = 0.0;    // -log10(1 - e_c / e_tot), capped at 16
  Index r = 0;
};

SnapshotMatrix assemble_snapshots(const std::vector<Vector>& states,
                                  OffsetMode mode,
                                  std::vector<double> time_stamps = {},
                                  std::string parameter_tag = {});

/// Concatenate snapshot sets column-wise (dimensions must agree; the
/// offset is taken from the first set and re-applied to the others).
SnapshotMatrix merge_snapshots(const std::vector<SnapshotMatrix>& sets);

/// Thin SVD of the snapshot data; full left factor and spectrum.
std::pair<Matrix, Vector> compute_basis(const SnapshotMatrix& x);

EnergyReport energy_residual(const Vector& sigma, Index r);

/// Smallest r with energy_residual(sigma, r).e_r >= target; always >= 1.
Index truncate_for_energy(const Vector& sigma, double target_e_r);

/// Basis with the first r left singular vectors of the snapshot data.
ReducedBasis make_reduced_basis(const SnapshotMatrix& x, Index r);

/// Basis truncated at the given residual-energy target.
ReducedBasis make_reduced_basis_for_energy(const SnapshotMatrix& x,
                                           double target_e_r);

/// Prepend the normalized constant vector and re-orthonormalize the
/// remaining columns against it (near-zero columns are dropped). Keeps
/// discrete conservation of the constant test direction exact.
ReducedBasis augment_with_constant(const ReducedBasis& in);

/// Stack per-field bases block-diagonally into one basis over the
/// concatenated state; offsets concatenate likewise.
ReducedBasis stack_field_bases(const std::vector<ReducedBasis>& fields);

}  // namespace hyperred
