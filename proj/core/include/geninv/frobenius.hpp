#pragma once

#include <functional>
#include <string>
#include <vector>

#include "geninv/projector.hpp"
#include "geninv/subspace.hpp"

namespace geninv {

// A rule x ↦ M(x) assigning a subspace to each point of an open set Λ. The
// rule must be safe for concurrent invocation; M(x) must keep a constant
// dimension over any single integration run.
struct DistributionFamily {
  Index ambient_dim = 0;
  std::function<Subspace(const Vector&)> subspace_at;
  std::function<bool(const Vector&)> domain_predicate;  // membership in Λ
};

// Splitting E = M0 ⊕ E_* at a base point, with the two frame projectors.
struct SplitFrame {
  Vector x0;
  Subspace m0;      // M(x0)
  Subspace e_star;
  Projector onto_m0;     // range M0, nullspace E_*
  Projector onto_estar;  // range E_*, nullspace M0
};

/// Frame with E_* = the orthogonal complement of M(x0).
SplitFrame make_split_frame(const DistributionFamily& f, const Vector& x0);

SplitFrame make_split_frame(const DistributionFamily& f, const Vector& x0,
                            const Subspace& e_star);

// Coordinate matrix of the unique alpha with E1 = { e + alpha e : e in E0 },
// expressed in the orthonormal frame bases (dim E_* rows, dim E0 columns).
struct GraphOperator {
  Matrix alpha;
};

/// The composite P^{E0}_{E_*} ∘ P^{E_*}_{E1} restricted to E0. Throws
/// ComplementError when either E0 ⊕ E_* or E1 ⊕ E_* fails; the reconstructed
/// graph is checked against E1 before returning.
GraphOperator graph_operator(const Subspace& e0, const Subspace& e1, const Subspace& e_star,
                             double tol = kDirectSumTol);

/// True iff M(x) ⊕ E_* = E. Throws DomainError when x is outside Λ.
bool cofinal_membership(const DistributionFamily& f, const SplitFrame& frame, const Vector& x);

/// alpha(x) = graph_operator(M0, M(x), E_*). Throws NotCofinal when x is not
/// in the co-final set.
GraphOperator alpha_field(const DistributionFamily& f, const SplitFrame& frame, const Vector& x);

// Sampled solution of psi'(x) = alpha(x + psi(x)) over a grid in M0
// coordinates; the graph { x + psi(x) } is the integral patch.
struct IntegralPatch {
  SplitFrame frame;
  std::vector<Vector> grid;        // M0 coordinates, one per grid point
  std::vector<Vector> psi_values;  // E_* coordinates, aligned with grid
  std::vector<std::vector<int>> lattice;  // integer offsets from the base point
  Vector base_coords;  // M0 coordinates of x0
  Vector base_psi;     // E_* coordinates of x0
  double ode_step = 0.0;
  double grid_step = 0.0;
  double radius = 0.0;

  /// x + psi(x) in ambient coordinates for grid point i.
  Vector ambient_point(std::size_t i) const;
};

/// Integrates psi along straight rays from the base coordinate to each grid
/// point of the ball, with classical 4th-order steps of size `ode_step`.
/// Every evaluation point is checked for domain membership (DomainError),
/// co-finality (NotCofinal) and constant family dimension.
IntegralPatch integrate_patch(const DistributionFamily& f, const SplitFrame& frame,
                              double radius, double grid_step, double ode_step);

/// || psi_path1(target) - psi_path2(target) || for two polylines from the
/// base coordinate to `target`; near zero exactly for integrable families.
double integrability_residual(const DistributionFamily& f, const SplitFrame& frame,
                              const Vector& target, const std::vector<Vector>& path1,
                              const std::vector<Vector>& path2, double ode_step);

/// Max principal angle over the grid between (I + psi'(x)) M0, with psi'
/// taken by finite differences on the grid, and M(x + psi(x)).
double verify_tangency(const IntegralPatch& patch, const DistributionFamily& f);

struct NamedFamily {
  std::string name;
  DistributionFamily family;
  Vector x0;
  Matrix e_star_columns;  // pinned E_* frame
  double radius;
  double grid_step;
  double ode_step;
  bool integrable;
  // Patch integration only makes sense when the family keeps its dimension
  // on a neighborhood of the rays; membership queries always work.
  bool supports_patch = true;
  // Closed-form psi in frame coordinates when one is known; empty otherwise.
  std::function<double(const Vector&)> closed_form;
  Vector residual_target;  // target for the two-path residual demo (may be empty)
};

const std::vector<NamedFamily>& builtin_families();

/// nullptr when the name is not registered.
const NamedFamily* find_builtin_family(const std::string& name);

}  // namespace geninv
