#pragma once

#include <vector>

#include "geninv/geninv.hpp"
#include "geninv/rng.hpp"

namespace geninv {

// A point of the fixed-rank operator manifold together with a generalized
// inverse; projectors X X+ and X+ X are cached for the chart maps.
class OperatorPoint {
 public:
  explicit OperatorPoint(GenInverse gi);

  static OperatorPoint moore_penrose(const Matrix& x, double rel_tol = 0.0);

  const Matrix& x() const { return gi_.a(); }
  const GenInverse& gen_inv() const { return gi_; }
  Index rows() const { return gi_.rows(); }
  Index cols() const { return gi_.cols(); }
  Index rank() const { return gi_.rank(); }

  const Matrix& xxp() const { return xxp_; }  // X X+  (codomain projector)
  const Matrix& xpx() const { return xpx_; }  // X+ X  (domain projector)

 private:
  GenInverse gi_;
  Matrix xxp_;
  Matrix xpx_;
};

// A subspace of the operator space B(R^n, R^m), with a basis orthonormal
// under the trace pairing <S, T> = trace(S^T T).
struct OperatorSubspace {
  Index rows = 0;
  Index cols = 0;
  std::vector<Matrix> basis;

  Index dim() const { return static_cast<Index>(basis.size()); }
};

/// Frobenius-norm residual of w against span(s), normalized by 1 + ||w||_F.
double operator_subspace_residual(const OperatorSubspace& s, const Matrix& w);

/// Basis of the tangent space M(X) = { T : T N(X) ⊆ R(X) }, of dimension
/// r(m + n - r). Computed as the kernel of T ↦ (I - P_{R(X)}) T B_{N(X)}.
OperatorSubspace tangent_space_basis(const OperatorPoint& p, double rel_tol = 0.0);

/// Basis of the complement E_X = { (I - XX+) T (I - X+X) }, of dimension
/// (m - r)(n - r); M(X) ⊕ E_X is the whole operator space.
OperatorSubspace complement_space_basis(const OperatorPoint& p, double rel_tol = 0.0);

struct OperatorDecomposition {
  Matrix part1;  // XX+ T
  Matrix part2;  // (I - XX+) T X+X
  Matrix part3;  // (I - XX+) T (I - X+X)
};

/// Splits T into part1 + part2 + part3 exactly; part1 + part2 lies in M(X)
/// and part3 in E_X.
OperatorDecomposition decompose_operator(const OperatorPoint& p, const Matrix& t);

/// Chart map (T - X)X+X + C^{-1} T with C = I + (T - X)X+, a diffeomorphism
/// of the ball V(X, X+) fixing X. Throws NeighborhoodError outside the ball.
Matrix chart_forward(const OperatorPoint& p, const Matrix& t,
                     double margin = kNeighborhoodMargin);

/// Inverse chart m X+X + C(X+, m) m (I - X+X).
Matrix chart_inverse(const OperatorPoint& p, const Matrix& m,
                     double margin = kNeighborhoodMargin);

/// Derivative of the chart at T applied to the increment dT; the identity map
/// at T = X.
Matrix chart_derivative(const OperatorPoint& p, const Matrix& t, const Matrix& dt,
                        double margin = kNeighborhoodMargin);

struct ManifoldCheckReport {
  int samples = 0;
  bool all_pass = false;
  double forward_membership_max_residual = 0.0;  // forward images against M(X)
  double roundtrip_max_residual = 0.0;           // both chart directions
  int rank_mismatches = 0;                       // inverse images with rank != rank(X)
  int intersection_failures = 0;                 // inverse images with R(T) ∩ N(X+) != 0
};

/// Draws rank-preserving samples through the inverse chart of random points
/// of M(X) ∩ V and checks both directions of the manifold identification.
ManifoldCheckReport verify_chart_maps_manifold(const OperatorPoint& p, int samples, Rng& rng,
                                               double rel_tol = 0.0,
                                               double margin = kNeighborhoodMargin);

}  // namespace geninv
