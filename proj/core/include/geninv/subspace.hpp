#pragma once

#include "geninv/matrix.hpp"

namespace geninv {

// A linear subspace of R^n stored as an orthonormal column basis. The zero
// subspace is the n x 0 case and is accepted by every operation.
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(Index ambient_dim);
  static Subspace full(Index ambient_dim);

  /// Spans the given columns. Orthonormal input is kept as-is (so caller
  /// frames stay pinned); anything else is orthonormalized by SVD with
  /// rank truncation at `rel_tol`.
  static Subspace from_columns(const Matrix& columns, double rel_tol = 0.0);

  Index ambient_dim() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

 private:
  explicit Subspace(Matrix orthonormal_basis) : basis_(std::move(orthonormal_basis)) {}
  Matrix basis_;  // ambient_dim x dim, orthonormal columns
};

Subspace orthogonal_complement(const Subspace& s);

/// Smallest singular value of [basis(s1) basis(s2)]; +inf when both are zero
/// subspaces.
double min_concat_singular_value(const Subspace& s1, const Subspace& s2);

/// True iff dims sum to the ambient dimension and the concatenated bases are
/// uniformly independent (smallest singular value above `tol`).
bool is_direct_sum(const Subspace& s1, const Subspace& s2, double tol = kDirectSumTol);

/// Orthonormal basis of s1 ∩ s2; dimension decided by the singular-value
/// threshold `tol` on the concatenated-basis system.
Subspace subspace_intersection(const Subspace& s1, const Subspace& s2,
                               double tol = kDirectSumTol);

/// Largest canonical angle between equal-dimensional subspaces, computed from
/// sines so small angles keep full precision. Returns pi/2 when dims differ.
double max_principal_angle(const Subspace& s1, const Subspace& s2);

/// Largest angle from `sub` into `sup` (zero iff sub ⊆ sup). Returns pi/2
/// when dim(sub) > dim(sup).
double containment_angle(const Subspace& sub, const Subspace& sup);

bool subspaces_equal(const Subspace& s1, const Subspace& s2, double angle_tol = kAngleTol);

Subspace range_space(const Matrix& a, double rel_tol = 0.0);
Subspace null_space(const Matrix& a, double rel_tol = 0.0);

/// B * B^T, the orthogonal projection onto s.
Matrix orth_projection_matrix(const Subspace& s);

}  // namespace geninv
