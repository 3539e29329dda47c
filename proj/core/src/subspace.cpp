#include "geninv/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace geninv {

namespace {

bool is_orthonormal(const Matrix& columns) {
  if (columns.cols() == 0) return true;
  const Matrix gram = columns.transpose() * columns;
  const Matrix eye = Matrix::Identity(columns.cols(), columns.cols());
  return (gram - eye).cwiseAbs().maxCoeff() <= 1e-12;
}

Matrix concat_bases(const Subspace& s1, const Subspace& s2) {
  Matrix k(s1.ambient_dim(), s1.dim() + s2.dim());
  k.leftCols(s1.dim()) = s1.basis();
  k.rightCols(s2.dim()) = s2.basis();
  return k;
}

void require_same_ambient(const Subspace& s1, const Subspace& s2, const char* context) {
  if (s1.ambient_dim() != s2.ambient_dim()) {
    throw std::invalid_argument(std::string(context) + ": ambient dimensions differ");
  }
}

}  // namespace

Subspace Subspace::zero(Index ambient_dim) { return Subspace(Matrix(ambient_dim, 0)); }

Subspace Subspace::full(Index ambient_dim) {
  return Subspace(Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::from_columns(const Matrix& columns, double rel_tol) {
  require_finite(columns, "Subspace::from_columns");
  if (columns.cols() == 0) return zero(columns.rows());
  if (is_orthonormal(columns)) return Subspace(columns);
  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return zero(columns.rows());
  const double cutoff = effective_rank_tol(columns.rows(), columns.cols(), rel_tol) * sv(0);
  Index r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;
  return Subspace(svd.matrixU().leftCols(r));
}

Subspace orthogonal_complement(const Subspace& s) {
  const Index n = s.ambient_dim();
  if (s.dim() == 0) return Subspace::full(n);
  if (s.dim() == n) return Subspace::zero(n);
  Eigen::JacobiSVD<Matrix> svd(s.basis(), Eigen::ComputeFullU);
  return Subspace::from_columns(svd.matrixU().rightCols(n - s.dim()));
}

double min_concat_singular_value(const Subspace& s1, const Subspace& s2) {
  require_same_ambient(s1, s2, "min_concat_singular_value");
  const Index total = s1.dim() + s2.dim();
  if (total == 0) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<Matrix> svd(concat_bases(s1, s2));
  const auto& sv = svd.singularValues();
  if (total > s1.ambient_dim()) return 0.0;  // forced dependence
  return sv(sv.size() - 1);
}

bool is_direct_sum(const Subspace& s1, const Subspace& s2, double tol) {
  require_same_ambient(s1, s2, "is_direct_sum");
  if (s1.dim() + s2.dim() != s1.ambient_dim()) return false;
  return min_concat_singular_value(s1, s2) > tol;
}

Subspace subspace_intersection(const Subspace& s1, const Subspace& s2, double tol) {
  require_same_ambient(s1, s2, "subspace_intersection");
  if (s1.dim() == 0 || s2.dim() == 0) return Subspace::zero(s1.ambient_dim());
  Matrix k(s1.ambient_dim(), s1.dim() + s2.dim());
  k.leftCols(s1.dim()) = s1.basis();
  k.rightCols(s2.dim()) = -s2.basis();
  Eigen::JacobiSVD<Matrix> svd(k, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  // Null directions [c; d] of the concatenated system give vectors
  // B1 c = B2 d lying in both subspaces.
  Index null_count = 0;
  const Index total = s1.dim() + s2.dim();
  for (Index i = 0; i < total; ++i) {
    const double s = i < sv.size() ? sv(i) : 0.0;
    if (s <= tol) ++null_count;
  }
  if (null_count == 0) return Subspace::zero(s1.ambient_dim());
  const Matrix nulls = svd.matrixV().rightCols(null_count);
  return Subspace::from_columns(s1.basis() * nulls.topRows(s1.dim()));
}

double max_principal_angle(const Subspace& s1, const Subspace& s2) {
  require_same_ambient(s1, s2, "max_principal_angle");
  if (s1.dim() != s2.dim()) return M_PI / 2.0;
  if (s1.dim() == 0) return 0.0;
  const Matrix resid = s2.basis() - s1.basis() * (s1.basis().transpose() * s2.basis());
  const double s = std::min(1.0, spectral_norm(resid));
  return std::asin(s);
}

double containment_angle(const Subspace& sub, const Subspace& sup) {
  require_same_ambient(sub, sup, "containment_angle");
  if (sub.dim() == 0) return 0.0;
  if (sub.dim() > sup.dim()) return M_PI / 2.0;
  const Matrix resid = sub.basis() - sup.basis() * (sup.basis().transpose() * sub.basis());
  const double s = std::min(1.0, spectral_norm(resid));
  return std::asin(s);
}

bool subspaces_equal(const Subspace& s1, const Subspace& s2, double angle_tol) {
  return s1.dim() == s2.dim() && max_principal_angle(s1, s2) <= angle_tol;
}

Subspace range_space(const Matrix& a, double rel_tol) {
  require_finite(a, "range_space");
  if (a.cols() == 0) return Subspace::zero(a.rows());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return Subspace::zero(a.rows());
  const double cutoff = effective_rank_tol(a.rows(), a.cols(), rel_tol) * sv(0);
  Index r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;
  return Subspace::from_columns(svd.matrixU().leftCols(r));
}

Subspace null_space(const Matrix& a, double rel_tol) {
  require_finite(a, "null_space");
  if (a.cols() == 0) return Subspace::zero(0);
  if (a.rows() == 0) return Subspace::full(a.cols());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Index r = 0;
  if (sv.size() > 0 && sv(0) > 0.0) {
    const double cutoff = effective_rank_tol(a.rows(), a.cols(), rel_tol) * sv(0);
    while (r < sv.size() && sv(r) > cutoff) ++r;
  }
  return Subspace::from_columns(svd.matrixV().rightCols(a.cols() - r));
}

Matrix orth_projection_matrix(const Subspace& s) {
  return s.basis() * s.basis().transpose();
}

}  // namespace geninv
