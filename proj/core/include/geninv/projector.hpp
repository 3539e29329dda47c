#pragma once

#include <utility>

#include "geninv/subspace.hpp"

namespace geninv {

// Idempotent P with prescribed range and nullspace (not necessarily
// orthogonal to each other).
struct Projector {
  Matrix matrix;
  Subspace range;
  Subspace nullspace;
};

/// Projection onto `range` along `nullspace`, built by solving the
/// decomposition x = r + n on the concatenated basis. Throws ComplementError
/// when the two subspaces do not form a direct sum.
Projector oblique_projector(const Subspace& range, const Subspace& nullspace,
                            double tol = kDirectSumTol);

/// Returns (P, Q) with P projecting onto e1 along e2 and Q onto e2^perp along
/// e1^perp; P^T equals Q.
std::pair<Projector, Projector> adjoint_projector(const Subspace& e1, const Subspace& e2,
                                                  double tol = kDirectSumTol);

}  // namespace geninv
