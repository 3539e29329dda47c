#include "geninv/geninv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "geninv/errors.hpp"
#include "geninv/parallel.hpp"

namespace geninv {

namespace {

// Residuals of the two defining equations, each normalized by its natural
// scale so the check is size-free.
void require_gen_inverse_pair(const Matrix& a, const Matrix& b, const char* context) {
  const double na = spectral_norm(a);
  const double nb = spectral_norm(b);
  const double r1 = spectral_norm(a * b * a - a) / ((1.0 + na) * (1.0 + na * nb));
  const double r2 = spectral_norm(b * a * b - b) / ((1.0 + nb) * (1.0 + na * nb));
  if (r1 > kGenInverseTol || r2 > kGenInverseTol) {
    throw NotAGenInverse(std::string(context) + ": defining equations fail (residuals " +
                         std::to_string(r1) + ", " + std::to_string(r2) + ")");
  }
}

Matrix identity_like_rows(const Matrix& a) { return Matrix::Identity(a.rows(), a.rows()); }

}  // namespace

namespace {

template <typename Svd>
Matrix pinv_from_svd(const Svd& svd, Index rows, Index cols, double rel_tol) {
  const auto& sv = svd.singularValues();
  Vector inv = Vector::Zero(sv.size());
  if (sv.size() > 0 && sv(0) > 0.0) {
    const double cutoff = effective_rank_tol(rows, cols, rel_tol) * sv(0);
    for (Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
    }
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace

Matrix mp_inverse(const Matrix& a, double rel_tol) {
  require_finite(a, "mp_inverse");
  if (a.rows() == 0 || a.cols() == 0) return Matrix::Zero(a.cols(), a.rows());
  if (std::min(a.rows(), a.cols()) >= 16) {
    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return pinv_from_svd(svd, a.rows(), a.cols(), rel_tol);
  }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return pinv_from_svd(svd, a.rows(), a.cols(), rel_tol);
}

GenInverse::GenInverse(Matrix a, Matrix a_plus, Subspace r_plus, Subspace n_plus)
    : a_(std::move(a)),
      a_plus_(std::move(a_plus)),
      range_of_inverse_(std::move(r_plus)),
      null_of_inverse_(std::move(n_plus)) {
  norm_a_ = spectral_norm(a_);
  norm_a_plus_ = spectral_norm(a_plus_);
}

double GenInverse::ball_radius() const {
  return norm_a_plus_ > 0.0 ? 1.0 / norm_a_plus_ : std::numeric_limits<double>::infinity();
}

GenInverse GenInverse::from_complements(const Matrix& a, const Subspace& r_plus,
                                        const Subspace& n_plus, double rel_tol) {
  require_finite(a, "GenInverse::from_complements");
  if (r_plus.ambient_dim() != a.cols() || n_plus.ambient_dim() != a.rows()) {
    throw std::invalid_argument("GenInverse::from_complements: complement dimensions "
                                "do not match the operator shape");
  }
  const Subspace n_a = null_space(a, rel_tol);
  const Subspace r_a = range_space(a, rel_tol);
  if (!is_direct_sum(n_a, r_plus)) {
    throw ComplementError("GenInverse::from_complements: N(A) + R+ is not a direct sum "
                          "of the domain");
  }
  if (!is_direct_sum(r_a, n_plus)) {
    throw ComplementError("GenInverse::from_complements: R(A) + N+ is not a direct sum "
                          "of the codomain");
  }
  // A+ inverts A|R+ on R(A) and kills N+: A+ = B_{R+} (A B_{R+})^+ P^{N+}_{R(A)}.
  const Projector onto_range = oblique_projector(r_a, n_plus);
  const Matrix a_restricted = a * r_plus.basis();
  const Matrix a_plus = r_plus.basis() * mp_inverse(a_restricted, rel_tol) * onto_range.matrix;
  require_gen_inverse_pair(a, a_plus, "GenInverse::from_complements");
  return GenInverse(a, a_plus, r_plus, n_plus);
}

GenInverse GenInverse::moore_penrose(const Matrix& a, double rel_tol) {
  require_finite(a, "GenInverse::moore_penrose");
  Matrix a_plus = mp_inverse(a, rel_tol);
  Subspace r_plus = range_space(a_plus, rel_tol);
  Subspace n_plus = null_space(a_plus, rel_tol);
  return GenInverse(a, std::move(a_plus), std::move(r_plus), std::move(n_plus));
}

GenInverse GenInverse::from_pair(const Matrix& a, const Matrix& a_plus, double rel_tol) {
  require_finite(a, "GenInverse::from_pair");
  require_finite(a_plus, "GenInverse::from_pair");
  if (a_plus.rows() != a.cols() || a_plus.cols() != a.rows()) {
    throw std::invalid_argument("GenInverse::from_pair: shape mismatch");
  }
  require_gen_inverse_pair(a, a_plus, "GenInverse::from_pair");
  Subspace r_plus = range_space(a_plus, rel_tol);
  Subspace n_plus = null_space(a_plus, rel_tol);
  return GenInverse(a, a_plus, std::move(r_plus), std::move(n_plus));
}

NashedChenResult nashed_chen_inverse(const GenInverse& g, const Matrix& t, double margin) {
  require_finite(t, "nashed_chen_inverse");
  if (t.rows() != g.rows() || t.cols() != g.cols()) {
    throw std::invalid_argument("nashed_chen_inverse: shape mismatch");
  }
  const Matrix delta = t - g.a();
  const double q = spectral_norm(delta) * g.norm_a_plus();
  if (!(q < 1.0 - margin)) {
    throw NeighborhoodError("nashed_chen_inverse: ||T-A||*||A+|| = " + std::to_string(q) +
                            " outside the admissible ball (margin " + std::to_string(margin) +
                            ")");
  }
  const Matrix c = identity_like_rows(t) + delta * g.a_plus();
  const Matrix d = Matrix::Identity(t.cols(), t.cols()) + g.a_plus() * delta;
  const Matrix b = g.a_plus() * c.partialPivLu().solve(identity_like_rows(t));
  // The two factorizations A+ C^{-1} and D^{-1} A+ agree; a gross mismatch
  // means the solve itself broke down.
  const Matrix b2 = d.partialPivLu().solve(g.a_plus());
  if (spectral_norm(b - b2) > 1e-10 * (1.0 + spectral_norm(b))) {
    throw Error("nashed_chen_inverse: the two factorizations disagree");
  }
  const double residual = spectral_norm(t * b * t - t);
  return {b, residual};
}

bool ConditionReport::all_equal() const {
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].holds != entries[0].holds) return false;
  }
  return true;
}

bool ConditionReport::all_true() const {
  for (const auto& e : entries) {
    if (!e.holds) return false;
  }
  return true;
}

const char* ConditionReport::label(std::size_t idx) {
  static const char* kLabels[7] = {"i", "ii", "iii", "iv", "v", "vi", "vii"};
  return kLabels[idx];
}

ConditionReport check_equivalent_conditions(const GenInverse& g, const Matrix& t,
                                            double margin, double rel_tol) {
  require_finite(t, "check_equivalent_conditions");
  if (t.rows() != g.rows() || t.cols() != g.cols()) {
    throw std::invalid_argument("check_equivalent_conditions: shape mismatch");
  }
  const Matrix& a = g.a();
  const Matrix& ap = g.a_plus();
  const Matrix delta = t - a;
  const double q = spectral_norm(delta) * g.norm_a_plus();
  if (!(q < 1.0 - margin)) {
    throw NeighborhoodError("check_equivalent_conditions: perturbation outside the ball");
  }

  const Matrix c = identity_like_rows(t) + delta * ap;
  const auto c_lu = c.partialPivLu();
  const Subspace range_t = range_space(t, rel_tol);
  const Subspace null_t = null_space(t, rel_tol);
  const Subspace range_a = range_space(a, rel_tol);
  const Subspace null_a = null_space(a, rel_tol);
  const Subspace& r_plus = g.range_of_inverse();
  const Subspace& n_plus = g.null_of_inverse();
  const double half_pi = M_PI / 2.0;

  ConditionReport report;

  // (i) R(T) ∩ N(A+) = {0}: trivial intersection iff the concatenated bases
  // stay uniformly independent.
  const double smin_range = min_concat_singular_value(range_t, n_plus);
  report.entries[0].holds = subspace_intersection(range_t, n_plus).dim() == 0;
  report.entries[0].residual = std::isfinite(smin_range) ? smin_range : 1.0;

  // (ii) B is the generalized inverse of T with R(B) = R(A+), N(B) = N(A+).
  {
    const Matrix b = ap * c_lu.solve(identity_like_rows(t));
    const double res_pen =
        spectral_norm(t * b * t - t) / ((1.0 + spectral_norm(t)) * (1.0 + spectral_norm(b)));
    const Subspace range_b = range_space(b, rel_tol);
    const Subspace null_b = null_space(b, rel_tol);
    const double ang_r =
        range_b.dim() == r_plus.dim() ? max_principal_angle(range_b, r_plus) : half_pi;
    const double ang_n =
        null_b.dim() == n_plus.dim() ? max_principal_angle(null_b, n_plus) : half_pi;
    report.entries[1].holds = res_pen <= kAngleTol && ang_r <= kAngleTol && ang_n <= kAngleTol;
    report.entries[1].residual = std::max({res_pen, ang_r, ang_n});
  }

  // (iii) R(T) ⊕ N(A+) = F.
  report.entries[2].holds = is_direct_sum(range_t, n_plus);
  report.entries[2].residual = report.entries[0].residual;

  // (iv) N(T) ⊕ R(A+) = E.
  {
    const double smin = min_concat_singular_value(null_t, r_plus);
    report.entries[3].holds = is_direct_sum(null_t, r_plus);
    report.entries[3].residual = std::isfinite(smin) ? smin : 1.0;
  }

  // (v) (I - A+A) N(T) = N(A).
  {
    const Matrix mapped = null_t.basis() - ap * (a * null_t.basis());
    const Subspace image = Subspace::from_columns(mapped, rel_tol);
    const double ang =
        image.dim() == null_a.dim() ? max_principal_angle(image, null_a) : half_pi;
    report.entries[4].holds = image.dim() == null_a.dim() && ang <= kAngleTol;
    report.entries[4].residual = ang;
  }

  // (vi) C^{-1} T N(A) ⊆ R(A), containment tested with the orthogonal
  // projection onto R(A).
  const Matrix p_range_a = orth_projection_matrix(range_a);
  {
    if (null_a.dim() == 0) {
      report.entries[5].holds = true;
      report.entries[5].residual = 0.0;
    } else {
      const Matrix w = c_lu.solve(t * null_a.basis());
      const double res = spectral_norm(w - p_range_a * w) / (1.0 + spectral_norm(w));
      report.entries[5].holds = res <= kAngleTol;
      report.entries[5].residual = res;
    }
  }

  // (vii) R(C^{-1} T) ⊆ R(A).
  {
    const Matrix u = c_lu.solve(t);
    const double res = spectral_norm(u - p_range_a * u) / (1.0 + spectral_norm(u));
    report.entries[6].holds = res <= kAngleTol;
    report.entries[6].residual = res;
  }

  return report;
}

double transfer_radius(const GenInverse& g, const Matrix& a_oplus) {
  require_finite(a_oplus, "transfer_radius");
  if (a_oplus.rows() != g.cols() || a_oplus.cols() != g.rows()) {
    throw std::invalid_argument("transfer_radius: shape mismatch");
  }
  try {
    require_gen_inverse_pair(g.a(), a_oplus, "transfer_radius");
  } catch (const NotAGenInverse&) {
    throw;
  }
  const Matrix b = g.a_plus() * g.a() * a_oplus;
  const double nb = spectral_norm(b);
  const double na = g.norm_a_plus();
  const double inv_na = na > 0.0 ? 1.0 / na : std::numeric_limits<double>::infinity();
  const double inv_nb = nb > 0.0 ? 1.0 / nb : std::numeric_limits<double>::infinity();
  return std::min(inv_na, inv_nb);
}

RankClass classify_rank_class(const Matrix& a, double rel_tol) {
  const Index r = rank_of(a, rel_tol);
  return {a.cols() - r, a.rows() - r, r};
}

LocalFineReport is_locally_fine(const SampledFamily& family, const GenInverse& g) {
  if (family.operators.empty()) {
    throw std::invalid_argument("is_locally_fine: empty family");
  }
  if (family.base_index >= family.operators.size()) {
    throw std::invalid_argument("is_locally_fine: base_index out of range");
  }
  const Matrix& base = family.operators[family.base_index];
  for (const Matrix& op : family.operators) {
    if (op.rows() != base.rows() || op.cols() != base.cols()) {
      throw std::invalid_argument("is_locally_fine: operators do not share one shape");
    }
  }
  if (spectral_norm(base - g.a()) > 1e-12 * (1.0 + g.norm_a())) {
    throw std::invalid_argument("is_locally_fine: family base differs from the inverse's "
                                "operator");
  }
  const double radius = g.ball_radius();
  for (std::size_t i = 0; i < family.operators.size(); ++i) {
    const double dist = spectral_norm(family.operators[i] - g.a());
    if (!(dist < radius)) {
      throw NeighborhoodError("is_locally_fine: sample " + std::to_string(i) +
                              " outside the ball (distance " + std::to_string(dist) + ")");
    }
  }
  LocalFineReport report;
  for (std::size_t i = 0; i < family.operators.size(); ++i) {
    const Subspace range_t = range_space(family.operators[i]);
    if (subspace_intersection(range_t, g.null_of_inverse()).dim() != 0) {
      report.witnesses.push_back(i);
    }
  }
  report.locally_fine = report.witnesses.empty();
  return report;
}

std::vector<SweepRow> mp_convergence_experiment(const Matrix& a, const Matrix& direction,
                                                const std::vector<double>& steps,
                                                double rel_tol) {
  require_finite(a, "mp_convergence_experiment");
  require_finite(direction, "mp_convergence_experiment");
  if (direction.rows() != a.rows() || direction.cols() != a.cols()) {
    throw std::invalid_argument("mp_convergence_experiment: direction shape mismatch");
  }
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(steps[i] > 0.0) || (i > 0 && !(steps[i] < steps[i - 1]))) {
      throw std::invalid_argument("mp_convergence_experiment: steps must be positive and "
                                  "strictly decreasing");
    }
  }
  const Matrix base_inv = mp_inverse(a, rel_tol);
  std::vector<SweepRow> rows(steps.size());
  parallel_for(steps.size(), [&](std::size_t i) {
    const double t = steps[i];
    const Matrix perturbed = a + t * direction;
    rows[i] = {t, rank_of(perturbed, rel_tol),
               spectral_norm(mp_inverse(perturbed, rel_tol) - base_inv)};
  });
  return rows;
}

}  // namespace geninv
