#pragma once

#include <Eigen/Dense>

namespace geninv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Numeric conventions used across the library. ||.|| is always the spectral
// norm; subspace equality and containment are decided by principal angles;
// direct sums by the smallest singular value of concatenated orthonormal
// bases; residual-style condition checks share the angle threshold.
inline constexpr double kRankRelTol = 1e-10;    // scaled by sigma_max * max(rows, cols)
inline constexpr double kAngleTol = 1e-8;
inline constexpr double kDirectSumTol = 1e-10;
inline constexpr double kNeighborhoodMargin = 1e-6;
inline constexpr double kGenInverseTol = 1e-8;  // defining-equation residual for supplied inverses

/// Largest singular value; zero for empty matrices.
double spectral_norm(const Matrix& a);

bool all_finite(const Matrix& a);

/// Throws std::invalid_argument when `a` contains NaN or Inf.
void require_finite(const Matrix& a, const char* context);

/// Relative singular-value cutoff for rank decisions. A non-positive
/// `rel_tol` selects the default kRankRelTol * max(rows, cols).
double effective_rank_tol(Index rows, Index cols, double rel_tol);

/// Number of singular values exceeding rel_tol * sigma_max.
Index rank_of(const Matrix& a, double rel_tol = 0.0);

}  // namespace geninv
