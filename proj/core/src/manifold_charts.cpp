#include "geninv/manifold_charts.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "geninv/errors.hpp"

namespace geninv {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return k;
}

Matrix unvec(const Vector& v, Index rows, Index cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

void require_shape(const OperatorPoint& p, const Matrix& t, const char* context) {
  require_finite(t, context);
  if (t.rows() != p.rows() || t.cols() != p.cols()) {
    throw std::invalid_argument(std::string(context) + ": shape mismatch");
  }
}

// The chart formulas only need C = I + (T-X)X+ to be safely invertible, and
// the contraction ||(T-X)X+|| is invariant under the chart itself, so round
// trips started inside the ball stay admissible even when the intermediate
// point leaves the literal ||T-X|| ball.
void require_in_ball(const OperatorPoint& p, const Matrix& t, double margin,
                     const char* context) {
  const double q = spectral_norm((t - p.x()) * p.gen_inv().a_plus());
  if (!(q < 1.0 - margin)) {
    throw NeighborhoodError(std::string(context) + ": ||(T-X)X+|| = " + std::to_string(q) +
                            " outside the admissible ball");
  }
}

}  // namespace

OperatorPoint::OperatorPoint(GenInverse gi) : gi_(std::move(gi)) {
  xxp_ = gi_.a() * gi_.a_plus();
  xpx_ = gi_.a_plus() * gi_.a();
}

OperatorPoint OperatorPoint::moore_penrose(const Matrix& x, double rel_tol) {
  return OperatorPoint(GenInverse::moore_penrose(x, rel_tol));
}

double operator_subspace_residual(const OperatorSubspace& s, const Matrix& w) {
  Matrix proj = Matrix::Zero(w.rows(), w.cols());
  for (const Matrix& b : s.basis) {
    proj += (b.array() * w.array()).sum() * b;
  }
  return (w - proj).norm() / (1.0 + w.norm());
}

OperatorSubspace tangent_space_basis(const OperatorPoint& p, double rel_tol) {
  const Index m = p.rows();
  const Index n = p.cols();
  OperatorSubspace out;
  out.rows = m;
  out.cols = n;

  const Subspace null_x = null_space(p.x(), rel_tol);
  if (null_x.dim() == 0) {
    // No constraint: M(X) is the whole operator space.
    out.basis.reserve(m * n);
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < m; ++i) {
        Matrix unit = Matrix::Zero(m, n);
        unit(i, j) = 1.0;
        out.basis.push_back(std::move(unit));
      }
    }
    return out;
  }

  // Kernel of T -> (I - P_{R(X)}) T B_{N(X)}. The constraint operator has
  // singular values 0 or 1, so the kernel cut is crisp.
  const Matrix residual_proj =
      Matrix::Identity(m, m) - orth_projection_matrix(range_space(p.x(), rel_tol));
  const Matrix constraint = kron(null_x.basis().transpose(), residual_proj);
  Eigen::JacobiSVD<Matrix> svd(constraint, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Index rank_constraint = 0;
  while (rank_constraint < sv.size() && sv(rank_constraint) > 0.5) ++rank_constraint;
  const Index dim = m * n - rank_constraint;
  out.basis.reserve(dim);
  const Matrix kernel = svd.matrixV().rightCols(dim);
  for (Index k = 0; k < dim; ++k) {
    out.basis.push_back(unvec(kernel.col(k), m, n));
  }
  return out;
}

OperatorSubspace complement_space_basis(const OperatorPoint& p, double rel_tol) {
  const Index m = p.rows();
  const Index n = p.cols();
  OperatorSubspace out;
  out.rows = m;
  out.cols = n;

  // Image of T -> (I - XX+) T (I - X+X).
  const Matrix left = Matrix::Identity(m, m) - p.xxp();
  const Matrix right = Matrix::Identity(n, n) - p.xpx();
  const Matrix image_map = kron(right.transpose(), left);
  Eigen::JacobiSVD<Matrix> svd(image_map, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return out;
  // Nonzero singular values of the projector product are bounded below by
  // O(1); an absolute floor keeps a numerically-zero map (full rank X) from
  // promoting rounding noise to basis vectors.
  const double cutoff = effective_rank_tol(m * n, m * n, rel_tol) * std::max(sv(0), 1.0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  out.basis.reserve(rank);
  for (Index k = 0; k < rank; ++k) {
    out.basis.push_back(unvec(svd.matrixU().col(k), m, n));
  }
  return out;
}

OperatorDecomposition decompose_operator(const OperatorPoint& p, const Matrix& t) {
  require_shape(p, t, "decompose_operator");
  const Index m = p.rows();
  const Index n = p.cols();
  const Matrix left = Matrix::Identity(m, m) - p.xxp();
  const Matrix right = Matrix::Identity(n, n) - p.xpx();
  OperatorDecomposition d;
  d.part1 = p.xxp() * t;
  d.part2 = left * t * p.xpx();
  d.part3 = left * t * right;
  return d;
}

Matrix chart_forward(const OperatorPoint& p, const Matrix& t, double margin) {
  require_shape(p, t, "chart_forward");
  require_in_ball(p, t, margin, "chart_forward");
  const Matrix c =
      Matrix::Identity(p.rows(), p.rows()) + (t - p.x()) * p.gen_inv().a_plus();
  return (t - p.x()) * p.xpx() + c.partialPivLu().solve(t);
}

Matrix chart_inverse(const OperatorPoint& p, const Matrix& m, double margin) {
  require_shape(p, m, "chart_inverse");
  require_in_ball(p, m, margin, "chart_inverse");
  const Matrix c =
      Matrix::Identity(p.rows(), p.rows()) + (m - p.x()) * p.gen_inv().a_plus();
  const Matrix right = Matrix::Identity(p.cols(), p.cols()) - p.xpx();
  return m * p.xpx() + c * m * right;
}

Matrix chart_derivative(const OperatorPoint& p, const Matrix& t, const Matrix& dt,
                        double margin) {
  require_shape(p, t, "chart_derivative");
  require_shape(p, dt, "chart_derivative");
  require_in_ball(p, t, margin, "chart_derivative");
  const Matrix c =
      Matrix::Identity(p.rows(), p.rows()) + (t - p.x()) * p.gen_inv().a_plus();
  const auto lu = c.partialPivLu();
  const Matrix cinv_dt = lu.solve(dt);
  const Matrix cinv_t = lu.solve(t);
  return dt * p.xpx() + cinv_dt - cinv_dt * p.gen_inv().a_plus() * cinv_t;
}

ManifoldCheckReport verify_chart_maps_manifold(const OperatorPoint& p, int samples, Rng& rng,
                                               double rel_tol, double margin) {
  ManifoldCheckReport report;
  report.samples = samples;
  const OperatorSubspace tangent = tangent_space_basis(p, rel_tol);
  const double ball = (1.0 - margin) * p.gen_inv().ball_radius();

  for (int k = 0; k < samples; ++k) {
    Matrix d = Matrix::Zero(p.rows(), p.cols());
    for (const Matrix& b : tangent.basis) d += rng.gaussian() * b;
    const double nd = spectral_norm(d);
    if (nd < 1e-14) continue;
    d /= nd;
    const Matrix m_pt = p.x() + rng.uniform(0.05, 0.9) * ball * d;

    const Matrix t = chart_inverse(p, m_pt, margin);
    const Matrix fwd = chart_forward(p, t, margin);

    const double roundtrip = spectral_norm(fwd - m_pt) / (1.0 + spectral_norm(m_pt));
    report.roundtrip_max_residual = std::max(report.roundtrip_max_residual, roundtrip);

    const double membership = operator_subspace_residual(tangent, fwd);
    report.forward_membership_max_residual =
        std::max(report.forward_membership_max_residual, membership);

    if (rank_of(t, rel_tol) != p.rank()) ++report.rank_mismatches;
    if (subspace_intersection(range_space(t, rel_tol), p.gen_inv().null_of_inverse()).dim() !=
        0) {
      ++report.intersection_failures;
    }
  }
  report.all_pass = report.rank_mismatches == 0 && report.intersection_failures == 0 &&
                    report.forward_membership_max_residual <= kAngleTol &&
                    report.roundtrip_max_residual <= 1e-10;
  return report;
}

}  // namespace geninv
