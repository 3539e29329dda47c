#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "geninv/projector.hpp"
#include "geninv/subspace.hpp"

namespace geninv {

/// Moore-Penrose inverse by singular-value factorization with threshold
/// rel_tol * sigma_max.
Matrix mp_inverse(const Matrix& a, double rel_tol = 0.0);

// A generalized inverse A+ of A bundled with the complements that define it:
// R+ = R(A+) in the domain and N+ = N(A+) in the codomain, so that
// N(A) ⊕ R+ = domain and R(A) ⊕ N+ = codomain.
class GenInverse {
 public:
  /// A+ acts as the inverse of A restricted to r_plus on R(A) and as zero on
  /// n_plus. Throws ComplementError when either direct sum fails.
  static GenInverse from_complements(const Matrix& a, const Subspace& r_plus,
                                     const Subspace& n_plus, double rel_tol = 0.0);

  /// Orthogonal complements: the Moore-Penrose inverse.
  static GenInverse moore_penrose(const Matrix& a, double rel_tol = 0.0);

  /// Wraps a caller-supplied pair (A, A+); throws NotAGenInverse when the
  /// defining equations fail.
  static GenInverse from_pair(const Matrix& a, const Matrix& a_plus, double rel_tol = 0.0);

  const Matrix& a() const { return a_; }
  const Matrix& a_plus() const { return a_plus_; }
  const Subspace& range_of_inverse() const { return range_of_inverse_; }
  const Subspace& null_of_inverse() const { return null_of_inverse_; }

  double norm_a() const { return norm_a_; }
  double norm_a_plus() const { return norm_a_plus_; }

  /// ||A+||^{-1}, the radius of the perturbation ball V(A, A+).
  double ball_radius() const;

  Index rows() const { return a_.rows(); }
  Index cols() const { return a_.cols(); }
  Index rank() const { return range_of_inverse_.dim(); }

 private:
  GenInverse(Matrix a, Matrix a_plus, Subspace r_plus, Subspace n_plus);

  Matrix a_;
  Matrix a_plus_;
  Subspace range_of_inverse_;
  Subspace null_of_inverse_;
  double norm_a_ = 0.0;
  double norm_a_plus_ = 0.0;
};

struct NashedChenResult {
  Matrix b;         // A+ (I + (T-A)A+)^{-1}, a (1,2)-inverse of the perturbation
  double residual;  // ||T B T - T||
};

/// Perturbation inverse B = A+ C^{-1} with C = I + (T-A)A+. Requires
/// ||T-A||·||A+|| < 1 - margin (NeighborhoodError otherwise). The residual
/// vanishes exactly when the perturbation is admissible.
NashedChenResult nashed_chen_inverse(const GenInverse& g, const Matrix& t,
                                     double margin = kNeighborhoodMargin);

struct ConditionEntry {
  bool holds = false;
  double residual = 0.0;  // the numerical quantity the boolean thresholds
};

// Independent evaluations of the seven equivalent admissibility conditions
// for a perturbation T of (A, A+).
struct ConditionReport {
  std::array<ConditionEntry, 7> entries;

  bool all_equal() const;
  bool all_true() const;
  static const char* label(std::size_t idx);  // "i" .. "vii"
};

ConditionReport check_equivalent_conditions(const GenInverse& g, const Matrix& t,
                                            double margin = kNeighborhoodMargin,
                                            double rel_tol = 0.0);

/// Radius delta = min(||A+||^{-1}, ||A+ A A_oplus||^{-1}) inside which
/// admissibility w.r.t. A+ transfers to any other generalized inverse
/// A_oplus. Throws NotAGenInverse when a_oplus fails the defining equations.
double transfer_radius(const GenInverse& g, const Matrix& a_oplus);

struct RankClass {
  Index dim_nullspace;  // cols - rank
  Index codim_range;    // rows - rank
  Index rank;
};

RankClass classify_rank_class(const Matrix& a, double rel_tol = 0.0);

// Finitely sampled operator family T_x with a designated base point.
struct SampledFamily {
  std::vector<Vector> points;     // parameter points, used for reporting only
  std::vector<Matrix> operators;  // one per point, all of one shape
  std::size_t base_index = 0;
};

struct LocalFineReport {
  bool locally_fine = false;
  std::vector<std::size_t> witnesses;  // indices where R(T_x) meets N(A+)
};

/// True iff R(T_x) ∩ N(A+) = {0} for every sample. All samples must lie in
/// the ball ||T_x - A|| < ||A+||^{-1} (NeighborhoodError otherwise). A finite
/// sample can only give one-sided evidence for the neighborhood statement.
LocalFineReport is_locally_fine(const SampledFamily& family, const GenInverse& g);

struct SweepRow {
  double t;
  Index rank;
  double mp_error;  // ||(A + t*direction)+ - A+||
};

/// Convergence/divergence table for the Moore-Penrose inverse along a ray.
/// Steps must be positive and strictly decreasing.
std::vector<SweepRow> mp_convergence_experiment(const Matrix& a, const Matrix& direction,
                                                const std::vector<double>& steps,
                                                double rel_tol = 0.0);

}  // namespace geninv
