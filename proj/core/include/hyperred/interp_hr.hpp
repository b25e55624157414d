// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hyperred/pod.hpp"
#include "hyperred/types.hpp"

#include <string>
#include <vector>

namespace hyperred {

/// Orthonormal basis for the range of the nonlinear force.
struct ForceBasis {
  Matrix basis;            // N x r_f, orthonormal columns
  Vector singular_values;  // spectrum behind the truncation

  Index rows() const { return basis.rows(); }
  Index cols() const { return basis.cols(); }
};

enum class SamplerKind { deim, qdeim_e, sopt };

std::string to_string(SamplerKind kind);
SamplerKind sampler_from_string(const std::string& name);

/// Ordered distinct row indices selected by a sampler.
struct SampleIndexSet {
  std::vector<Index> indices;
  Index source_basis_cols = 0;  // r_f of the basis the set was built for

  Index size() const { return static_cast<Index>(indices.size()); }
};

/// Greedy residual-driven sampling with oversampling spread evenly over
/// the basis columns. n_f = r_f gives the classical interpolation points.
SampleIndexSet deim_oversampled(const ForceBasis& xi, Index n_f);

/// Pivoted-QR start, then oversampling by maximizing the lower bound of
/// the smallest singular value of the sampled basis.
SampleIndexSet gappypod_e(const ForceBasis& xi, Index n_f);

/// Greedy maximization of the S measure of the sampled basis.
SampleIndexSet sopt(const ForceBasis& xi, Index n_f);

SampleIndexSet run_sampler(SamplerKind kind, const ForceBasis& xi, Index n_f);

/// S measure: (sqrt(det(A^T A)) / prod_k ||A e_k||)^(1/p).
/// Returns 0 for a zero column or a numerically singular Gram matrix.
double s_measure(const Matrix& a);

/// Rows of m at the sampled indices, in sample order.
Matrix sampled_rows(const Matrix& m, const SampleIndexSet& z);
Vector sampled_entries(const Vector& v, const SampleIndexSet& z);

struct ObliqueProjector {
  ForceBasis force_basis;
  SampleIndexSet samples;
  Matrix sampled_pinv;  // r_f x n_f, (Z^T Xi)^+
  Matrix contracted;    // r_y x n_f, Psi^T Xi (Z^T Xi)^+; empty without Psi
  bool rank_deficient = false;

  /// Full-space gappy reconstruction Xi (Z^T Xi)^+ f_Z.
  Vector reconstruct(const Vector& sampled_values) const;
};

ObliqueProjector build_projector(const ForceBasis& xi, const SampleIndexSet& z,
                                 const ReducedBasis* psi = nullptr);

struct ProjectionDiagnostics {
  double error = 0.0;             // ||(I - P) f||
  double bound = 0.0;             // ||(Z^T Xi)^+|| * ||(I - Xi Xi^T) f||
  double orthogonal_error = 0.0;  // ||(I - Xi Xi^T) f||
  double epsilon_norm = 0.0;
  bool within_bound = false;
  bool identity_holds = false;  // error^2 = orthogonal^2 + epsilon^2 (1e-8 rel)
};

ProjectionDiagnostics projection_error_diagnostics(const ForceBasis& xi,
                                                   const SampleIndexSet& z,
                                                   const Vector& f);

}  // namespace hyperred
