#include "geninv/projector.hpp"

#include <string>

#include "geninv/errors.hpp"

namespace geninv {

Projector oblique_projector(const Subspace& range, const Subspace& nullspace, double tol) {
  if (range.ambient_dim() != nullspace.ambient_dim()) {
    throw std::invalid_argument("oblique_projector: ambient dimensions differ");
  }
  const Index n = range.ambient_dim();
  const Index d1 = range.dim();
  const Index d2 = nullspace.dim();
  if (d1 + d2 != n) {
    throw ComplementError("oblique_projector: dims " + std::to_string(d1) + "+" +
                          std::to_string(d2) + " do not sum to ambient " + std::to_string(n));
  }
  Matrix k(n, n);
  k.leftCols(d1) = range.basis();
  k.rightCols(d2) = nullspace.basis();
  Eigen::JacobiSVD<Matrix> svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smin = n > 0 ? sv(n - 1) : 0.0;
  if (n > 0 && smin <= tol) {
    throw ComplementError("oblique_projector: subspaces do not form a direct sum "
                          "(smallest singular value " + std::to_string(smin) + ")");
  }
  // Decompose each standard basis vector as r + n; the projector returns the
  // range part, i.e. P = B_r * (top block of K^{-1}).
  const Matrix k_inv =
      svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
  Projector p;
  p.matrix = range.basis() * k_inv.topRows(d1);
  p.range = range;
  p.nullspace = nullspace;
  return p;
}

std::pair<Projector, Projector> adjoint_projector(const Subspace& e1, const Subspace& e2,
                                                  double tol) {
  Projector p = oblique_projector(e1, e2, tol);
  Projector q = oblique_projector(orthogonal_complement(e2), orthogonal_complement(e1), tol);
  return {std::move(p), std::move(q)};
}

}  // namespace geninv
