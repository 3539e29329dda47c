#include "geninv/matrix.hpp"

#include <stdexcept>
#include <string>

namespace geninv {

double spectral_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  if (a.rows() == 1 || a.cols() == 1) return a.norm();
  if (std::min(a.rows(), a.cols()) >= 16) {
    Eigen::BDCSVD<Matrix> svd(a);
    return svd.singularValues()(0);
  }
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

bool all_finite(const Matrix& a) { return a.allFinite(); }

void require_finite(const Matrix& a, const char* context) {
  if (!a.allFinite()) {
    throw std::invalid_argument(std::string(context) + ": matrix has non-finite entries");
  }
}

double effective_rank_tol(Index rows, Index cols, double rel_tol) {
  if (rel_tol > 0.0) return rel_tol;
  return kRankRelTol * static_cast<double>(std::max(rows, cols));
}

Index rank_of(const Matrix& a, double rel_tol) {
  require_finite(a, "rank_of");
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cutoff = effective_rank_tol(a.rows(), a.cols(), rel_tol) * sv(0);
  Index r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;
  return r;
}

}  // namespace geninv
