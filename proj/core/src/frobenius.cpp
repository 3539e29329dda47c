#include "geninv/frobenius.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "geninv/errors.hpp"
#include "geninv/manifold_charts.hpp"
#include "geninv/parallel.hpp"

namespace geninv {

namespace {

void require_point(const DistributionFamily& f, const Vector& x, const char* context) {
  if (x.size() != f.ambient_dim) {
    throw std::invalid_argument(std::string(context) + ": point dimension mismatch");
  }
  if (!f.domain_predicate(x)) {
    throw DomainError(std::string(context) + ": point outside the family domain");
  }
}

// Evaluates the graph-operator coordinates along an integration run. The
// single solve on [B_M(x) | -B_*] yields the same alpha as the projector
// composite (the operator is unique) and shares its factorization with the
// co-finality test.
struct RayField {
  const DistributionFamily& f;
  const SplitFrame& frame;
  double tol;

  Matrix alpha_at(const Vector& pt) const {
    if (!f.domain_predicate(pt)) {
      throw DomainError("integrate: ray left the family domain");
    }
    const Subspace m = f.subspace_at(pt);
    const Index n = frame.m0.ambient_dim();
    const Index k = frame.m0.dim();
    const Index e = frame.e_star.dim();
    if (m.ambient_dim() != n) {
      throw std::invalid_argument("integrate: family returned wrong ambient dimension");
    }
    if (m.dim() != k) {
      throw DomainError("integrate: family dimension changed from " + std::to_string(k) +
                        " to " + std::to_string(m.dim()));
    }
    Matrix concat(n, m.dim() + e);
    concat.leftCols(m.dim()) = m.basis();
    concat.rightCols(e) = -frame.e_star.basis();
    Eigen::JacobiSVD<Matrix> svd(concat, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (m.dim() + e != n || sv(sv.size() - 1) <= tol) {
      throw NotCofinal("integrate: ray left the co-final set");
    }
    const Matrix solved = svd.solve(frame.m0.basis());
    return solved.bottomRows(e);  // coordinates of alpha in the frame bases
  }
};

Vector ambient_of(const SplitFrame& frame, const Vector& v, const Vector& w) {
  return frame.m0.basis() * v + frame.e_star.basis() * w;
}

// Classical 4th-order steps for w'(s) = alpha(x(s) + w(s)) u along a straight
// segment from (v_start, w_start) towards v_start + length * u.
Vector integrate_segment(const RayField& field, const SplitFrame& frame, const Vector& v_start,
                         const Vector& w_start, const Vector& u, double length,
                         double ode_step) {
  Vector w = w_start;
  if (length < 1e-15) return w;
  const auto steps = static_cast<long>(std::ceil(length / ode_step));
  const double h = length / static_cast<double>(steps);
  auto rhs = [&](double s, const Vector& wv) -> Vector {
    return field.alpha_at(ambient_of(frame, v_start + s * u, wv)) * u;
  };
  double s = 0.0;
  for (long i = 0; i < steps; ++i) {
    const Vector k1 = rhs(s, w);
    const Vector k2 = rhs(s + 0.5 * h, w + 0.5 * h * k1);
    const Vector k3 = rhs(s + 0.5 * h, w + 0.5 * h * k2);
    const Vector k4 = rhs(s + h, w + h * k3);
    w += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s += h;
  }
  return w;
}

void enumerate_lattice(Index dims, int max_offset, double grid_step, double radius,
                       std::vector<int>& current, std::vector<std::vector<int>>& out) {
  if (static_cast<Index>(current.size()) == dims) {
    double norm2 = 0.0;
    for (int c : current) norm2 += static_cast<double>(c) * c;
    if (grid_step * std::sqrt(norm2) <= radius + 1e-12) out.push_back(current);
    return;
  }
  for (int c = -max_offset; c <= max_offset; ++c) {
    current.push_back(c);
    enumerate_lattice(dims, max_offset, grid_step, radius, current, out);
    current.pop_back();
  }
}

}  // namespace

SplitFrame make_split_frame(const DistributionFamily& f, const Vector& x0,
                            const Subspace& e_star) {
  require_point(f, x0, "make_split_frame");
  SplitFrame frame;
  frame.x0 = x0;
  frame.m0 = f.subspace_at(x0);
  frame.e_star = e_star;
  if (!is_direct_sum(frame.m0, frame.e_star)) {
    throw ComplementError("make_split_frame: M(x0) + E_* is not a direct sum");
  }
  frame.onto_m0 = oblique_projector(frame.m0, frame.e_star);
  frame.onto_estar = oblique_projector(frame.e_star, frame.m0);
  return frame;
}

SplitFrame make_split_frame(const DistributionFamily& f, const Vector& x0) {
  require_point(f, x0, "make_split_frame");
  return make_split_frame(f, x0, orthogonal_complement(f.subspace_at(x0)));
}

GraphOperator graph_operator(const Subspace& e0, const Subspace& e1, const Subspace& e_star,
                             double tol) {
  if (!is_direct_sum(e0, e_star, tol)) {
    throw ComplementError("graph_operator: E0 + E_* is not a direct sum");
  }
  if (!is_direct_sum(e1, e_star, tol)) {
    throw ComplementError("graph_operator: E1 + E_* is not a direct sum");
  }
  // alpha = P^{E0}_{E_*} P^{E_*}_{E1} restricted to E0, in frame coordinates.
  const Projector onto_e1 = oblique_projector(e1, e_star, tol);
  const Projector onto_estar = oblique_projector(e_star, e0, tol);
  GraphOperator g;
  g.alpha = e_star.basis().transpose() * (onto_estar.matrix * (onto_e1.matrix * e0.basis()));

  const Subspace graph =
      Subspace::from_columns(e0.basis() + e_star.basis() * g.alpha);
  if (!subspaces_equal(graph, e1)) {
    throw Error("graph_operator: reconstructed graph does not reproduce the target subspace");
  }
  return g;
}

bool cofinal_membership(const DistributionFamily& f, const SplitFrame& frame, const Vector& x) {
  require_point(f, x, "cofinal_membership");
  return is_direct_sum(f.subspace_at(x), frame.e_star);
}

GraphOperator alpha_field(const DistributionFamily& f, const SplitFrame& frame,
                          const Vector& x) {
  if (!cofinal_membership(f, frame, x)) {
    throw NotCofinal("alpha_field: point is not in the co-final set");
  }
  return graph_operator(frame.m0, f.subspace_at(x), frame.e_star);
}

Vector IntegralPatch::ambient_point(std::size_t i) const {
  return frame.m0.basis() * grid[i] + frame.e_star.basis() * psi_values[i];
}

IntegralPatch integrate_patch(const DistributionFamily& f, const SplitFrame& frame,
                              double radius, double grid_step, double ode_step) {
  if (!(ode_step > 0.0)) throw StepError("integrate_patch: ode_step must be positive");
  if (!(grid_step > 0.0)) throw StepError("integrate_patch: grid_step must be positive");
  if (radius < 0.0) throw StepError("integrate_patch: radius must be nonnegative");

  IntegralPatch patch;
  patch.frame = frame;
  patch.ode_step = ode_step;
  patch.grid_step = grid_step;
  patch.radius = radius;
  patch.base_coords = frame.m0.basis().transpose() * (frame.onto_m0.matrix * frame.x0);
  patch.base_psi = frame.e_star.basis().transpose() * (frame.onto_estar.matrix * frame.x0);

  const Index k = frame.m0.dim();
  const int max_offset = static_cast<int>(std::floor(radius / grid_step + 1e-12));
  std::vector<int> scratch;
  enumerate_lattice(k, max_offset, grid_step, radius, scratch, patch.lattice);

  patch.grid.resize(patch.lattice.size());
  patch.psi_values.resize(patch.lattice.size());
  for (std::size_t i = 0; i < patch.lattice.size(); ++i) {
    Vector v = patch.base_coords;
    for (Index d = 0; d < k; ++d) v(d) += grid_step * patch.lattice[i][d];
    patch.grid[i] = v;
  }

  const RayField field{f, frame, kDirectSumTol};
  parallel_for(patch.grid.size(), [&](std::size_t i) {
    const Vector dv = patch.grid[i] - patch.base_coords;
    const double len = dv.norm();
    if (len < 1e-15) {
      patch.psi_values[i] = patch.base_psi;
      return;
    }
    patch.psi_values[i] = integrate_segment(field, frame, patch.base_coords, patch.base_psi,
                                            dv / len, len, ode_step);
  });
  return patch;
}

double integrability_residual(const DistributionFamily& f, const SplitFrame& frame,
                              const Vector& target, const std::vector<Vector>& path1,
                              const std::vector<Vector>& path2, double ode_step) {
  if (!(ode_step > 0.0)) throw StepError("integrability_residual: ode_step must be positive");
  const Vector base = frame.m0.basis().transpose() * (frame.onto_m0.matrix * frame.x0);
  const Vector base_psi = frame.e_star.basis().transpose() * (frame.onto_estar.matrix * frame.x0);

  auto run = [&](const std::vector<Vector>& path) -> Vector {
    if (path.size() < 2 || (path.front() - base).norm() > 1e-9 ||
        (path.back() - target).norm() > 1e-9) {
      throw std::invalid_argument("integrability_residual: path must run from the base "
                                  "coordinate to the target");
    }
    const RayField field{f, frame, kDirectSumTol};
    Vector w = base_psi;
    Vector v = path.front();
    for (std::size_t s = 1; s < path.size(); ++s) {
      const Vector dv = path[s] - v;
      const double len = dv.norm();
      if (len < 1e-15) continue;
      w = integrate_segment(field, frame, v, w, dv / len, len, ode_step);
      v = path[s];
    }
    return w;
  };

  return (run(path1) - run(path2)).norm();
}

namespace {

// One-dimensional difference stencil along lattice direction j; nullptr-like
// empty return means the point has no usable neighbors in that direction.
bool stencil_derivative(const IntegralPatch& patch,
                        const std::map<std::vector<int>, std::size_t>& index,
                        std::size_t at, Index j, Vector& out) {
  const double h = patch.grid_step;
  auto value = [&](int offset, Vector& res) -> bool {
    std::vector<int> key = patch.lattice[at];
    key[j] += offset;
    auto it = index.find(key);
    if (it == index.end()) return false;
    res = patch.psi_values[it->second];
    return true;
  };

  Vector fm1, fp1, fp2, fp3;
  const bool has_m1 = value(-1, fm1);
  const bool has_p1 = value(+1, fp1);
  if (has_m1 && has_p1) {
    out = (fp1 - fm1) / (2.0 * h);
    return true;
  }
  const Vector& f0 = patch.psi_values[at];
  if (has_p1 && value(+2, fp2)) {
    if (value(+3, fp3)) {
      out = (-11.0 * f0 + 18.0 * fp1 - 9.0 * fp2 + 2.0 * fp3) / (6.0 * h);
    } else {
      out = (-3.0 * f0 + 4.0 * fp1 - fp2) / (2.0 * h);
    }
    return true;
  }
  if (has_m1 && value(-2, fp2)) {
    if (value(-3, fp3)) {
      out = (11.0 * f0 - 18.0 * fm1 + 9.0 * fp2 - 2.0 * fp3) / (6.0 * h);
    } else {
      out = (3.0 * f0 - 4.0 * fm1 + fp2) / (2.0 * h);
    }
    return true;
  }
  if (has_p1) {
    out = (fp1 - f0) / h;
    return true;
  }
  if (has_m1) {
    out = (f0 - fm1) / h;
    return true;
  }
  return false;
}

}  // namespace

double verify_tangency(const IntegralPatch& patch, const DistributionFamily& f) {
  const Index k = patch.frame.m0.dim();
  const Index e = patch.frame.e_star.dim();
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t i = 0; i < patch.lattice.size(); ++i) index[patch.lattice[i]] = i;

  double max_angle = 0.0;
  for (std::size_t i = 0; i < patch.grid.size(); ++i) {
    Matrix dpsi(e, k);
    bool complete = true;
    for (Index j = 0; j < k && complete; ++j) {
      Vector col;
      complete = stencil_derivative(patch, index, i, j, col);
      if (complete) dpsi.col(j) = col;
    }
    if (!complete) continue;

    // (I + psi'(x)) M0 against M(x + psi(x)).
    const Matrix tangent_cols =
        patch.frame.m0.basis() + patch.frame.e_star.basis() * dpsi;
    const Subspace moved = Subspace::from_columns(tangent_cols);
    const Subspace expected = f.subspace_at(patch.ambient_point(i));
    const double angle = expected.dim() == moved.dim()
                             ? max_principal_angle(moved, expected)
                             : M_PI / 2.0;
    max_angle = std::max(max_angle, angle);
  }
  return max_angle;
}

namespace {

Matrix unvec2(const Vector& v, Index rows, Index cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

std::vector<NamedFamily> make_builtin_families() {
  std::vector<NamedFamily> families;

  {
    // Tangent lines of the circles around the origin: M(x,y) = {(X,Y): xX + yY = 0}.
    DistributionFamily fam;
    fam.ambient_dim = 2;
    fam.subspace_at = [](const Vector& p) -> Subspace {
      const double r = p.norm();
      Matrix col(2, 1);
      col << p(1) / r, -p(0) / r;
      return Subspace::from_columns(col);
    };
    fam.domain_predicate = [](const Vector& p) { return p.norm() > 1e-12; };

    NamedFamily entry;
    entry.name = "circle";
    entry.family = fam;
    entry.x0 = (Vector(2) << 0.0, 1.0).finished();
    entry.e_star_columns = (Matrix(2, 1) << 0.0, 1.0).finished();
    entry.radius = 0.9;
    entry.grid_step = 1e-3;
    entry.ode_step = 1e-3;
    entry.integrable = true;
    entry.closed_form = [](const Vector& v) { return std::sqrt(1.0 - v(0) * v(0)); };
    entry.residual_target = (Vector(1) << 0.5).finished();
    families.push_back(std::move(entry));
  }

  {
    // Tangent planes of the paraboloid z = x^2 + y^2.
    DistributionFamily fam;
    fam.ambient_dim = 3;
    fam.subspace_at = [](const Vector& p) -> Subspace {
      Matrix cols(3, 2);
      cols << 1.0, 0.0, 0.0, 1.0, 2.0 * p(0), 2.0 * p(1);
      return Subspace::from_columns(cols);
    };
    fam.domain_predicate = [](const Vector&) { return true; };

    NamedFamily entry;
    entry.name = "paraboloid";
    entry.family = fam;
    entry.x0 = Vector::Zero(3);
    entry.e_star_columns = (Matrix(3, 1) << 0.0, 0.0, 1.0).finished();
    entry.radius = 0.5;
    entry.grid_step = 0.05;
    entry.ode_step = 1e-3;
    entry.integrable = true;
    entry.closed_form = [](const Vector& v) { return v(0) * v(0) + v(1) * v(1); };
    entry.residual_target = (Vector(2) << 0.3, 0.3).finished();
    families.push_back(std::move(entry));
  }

  {
    // Contact planes dz = y dx, the classic non-integrable distribution.
    DistributionFamily fam;
    fam.ambient_dim = 3;
    fam.subspace_at = [](const Vector& p) -> Subspace {
      Matrix cols(3, 2);
      cols << 1.0, 0.0, 0.0, 1.0, p(1), 0.0;
      return Subspace::from_columns(cols);
    };
    fam.domain_predicate = [](const Vector&) { return true; };

    NamedFamily entry;
    entry.name = "contact";
    entry.family = fam;
    entry.x0 = Vector::Zero(3);
    entry.e_star_columns = (Matrix(3, 1) << 0.0, 0.0, 1.0).finished();
    entry.radius = 0.75;
    entry.grid_step = 0.05;
    entry.ode_step = 1e-3;
    entry.integrable = false;
    entry.closed_form = nullptr;
    entry.residual_target = (Vector(2) << 0.5, 0.5).finished();
    families.push_back(std::move(entry));
  }

  {
    // Operator-space family M(X) = {T : T N(X) ⊆ R(X)} over vectorized 2x2
    // matrices; the base point is the rank-one a11 unit.
    DistributionFamily fam;
    fam.ambient_dim = 4;
    fam.subspace_at = [](const Vector& p) -> Subspace {
      const Matrix x = unvec2(p, 2, 2);
      const OperatorSubspace tangent = tangent_space_basis(OperatorPoint::moore_penrose(x));
      Matrix cols(4, tangent.dim());
      for (Index i = 0; i < tangent.dim(); ++i) {
        cols.col(i) = Eigen::Map<const Vector>(tangent.basis[i].data(), 4);
      }
      return Subspace::from_columns(cols);
    };
    fam.domain_predicate = [](const Vector& p) { return p.norm() > 1e-12; };

    NamedFamily entry;
    entry.name = "rank-operators";
    entry.family = fam;
    entry.x0 = (Vector(4) << 1.0, 0.0, 0.0, 0.0).finished();
    entry.e_star_columns = (Matrix(4, 1) << 0.0, 0.0, 0.0, 1.0).finished();
    entry.radius = 0.4;
    entry.grid_step = 0.1;
    entry.ode_step = 1e-2;
    entry.integrable = true;
    // M(X) drops from dim 4 to dim 3 exactly on the rank-one set, so ray
    // integration aborts off the stratum; the family serves membership
    // queries only.
    entry.supports_patch = false;
    entry.closed_form = nullptr;
    entry.residual_target = Vector();
    families.push_back(std::move(entry));
  }

  return families;
}

}  // namespace

const std::vector<NamedFamily>& builtin_families() {
  static const std::vector<NamedFamily> families = make_builtin_families();
  return families;
}

const NamedFamily* find_builtin_family(const std::string& name) {
  for (const auto& entry : builtin_families()) {
    if (entry.name == name) return &entry;
  }
  return nullptr;
}

}  // namespace geninv
