#include "geninv/local_conjugacy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "geninv/errors.hpp"

namespace geninv {

namespace {

Matrix fd_jacobian(const SmoothMap& f, const Vector& x, double h) {
  Matrix j(f.codomain_dim, f.domain_dim);
  for (Index k = 0; k < f.domain_dim; ++k) {
    Vector xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    j.col(k) = (f.eval(xp) - f.eval(xm)) / (2.0 * h);
  }
  return j;
}

void require_shapes(const SmoothMap& f, const Vector& x0) {
  if (x0.size() != f.domain_dim) {
    throw std::invalid_argument("local_conjugacy: base point dimension mismatch");
  }
}

void require_pair(const Matrix& t0, const Matrix& t0_plus, const char* context) {
  const double n0 = spectral_norm(t0);
  const double np = spectral_norm(t0_plus);
  const double r1 = spectral_norm(t0 * t0_plus * t0 - t0) / ((1.0 + n0) * (1.0 + n0 * np));
  const double r2 =
      spectral_norm(t0_plus * t0 * t0_plus - t0_plus) / ((1.0 + np) * (1.0 + n0 * np));
  if (r1 > kGenInverseTol || r2 > kGenInverseTol) {
    throw NotAGenInverse(std::string(context) + ": t0_plus is not a generalized inverse of "
                         "f'(x0)");
  }
}

}  // namespace

SmoothMap make_checked_map(Index domain_dim, Index codomain_dim,
                           std::function<Vector(const Vector&)> eval,
                           std::function<Matrix(const Vector&)> jacobian) {
  SmoothMap f{domain_dim, codomain_dim, std::move(eval), std::move(jacobian)};
  Rng rng(0x9e3779b97f4a7c15ULL);
  for (int probe = 0; probe < 3; ++probe) {
    const Vector x = 0.3 * rng.gaussian_vector(domain_dim);
    const Matrix j = f.jacobian(x);
    const Matrix j_fd = fd_jacobian(f, x, 1e-6);
    if (spectral_norm(j - j_fd) > 1e-5 * (1.0 + spectral_norm(j))) {
      throw std::invalid_argument("make_checked_map: jacobian disagrees with finite "
                                  "differences");
    }
  }
  return f;
}

std::function<Vector(const Vector&)> build_phi(const SmoothMap& f, const Vector& x0,
                                               const Matrix& t0_plus) {
  require_shapes(f, x0);
  const Matrix t0 = f.jacobian(x0);
  require_pair(t0, t0_plus, "build_phi");
  const Vector y0 = f.eval(x0);
  const Matrix domain_proj = Matrix::Identity(f.domain_dim, f.domain_dim) - t0_plus * t0;
  return [f, x0, y0, t0_plus, domain_proj](const Vector& x) -> Vector {
    return t0_plus * (f.eval(x) - y0) + domain_proj * (x - x0);
  };
}

Vector invert_phi(const ConjugacyPair& pair, const SmoothMap& f, const Vector& y, double tol,
                  int max_iter) {
  const Matrix domain_proj =
      Matrix::Identity(f.domain_dim, f.domain_dim) - pair.t0_plus * pair.t0;
  Vector x = pair.x0 + y;
  for (int iter = 0; iter < max_iter; ++iter) {
    const Vector r = pair.phi(x) - y;
    if (r.norm() <= tol) return x;
    const Matrix j = pair.t0_plus * f.jacobian(x) + domain_proj;
    Eigen::FullPivLU<Matrix> lu(j);
    if (!lu.isInvertible()) {
      throw SingularJacobian("invert_phi: Newton step system is singular");
    }
    x -= lu.solve(r);
  }
  if ((pair.phi(x) - y).norm() <= tol) return x;
  throw NoConvergence("invert_phi: no convergence after " + std::to_string(max_iter) +
                      " iterations");
}

std::function<Vector(const Vector&)> build_psi(const SmoothMap& f, const ConjugacyPair& partial,
                                               const Matrix& t0_plus) {
  const Matrix codomain_proj =
      Matrix::Identity(f.codomain_dim, f.codomain_dim) - partial.t0 * t0_plus;
  ConjugacyPair captured = partial;  // phi and the frame, by value
  return [f, captured, t0_plus, codomain_proj](const Vector& y) -> Vector {
    const Vector x = invert_phi(captured, f, t0_plus * y);
    return f.eval(x) + codomain_proj * y;
  };
}

ConjugacyPair make_conjugacy_pair(const SmoothMap& f, const Vector& x0, const Matrix& t0_plus,
                                  Rng& rng) {
  require_shapes(f, x0);
  ConjugacyPair pair;
  pair.x0 = x0;
  pair.t0 = f.jacobian(x0);
  pair.t0_plus = t0_plus;
  pair.phi = build_phi(f, x0, t0_plus);

  // Working radius from a crude Lipschitz estimate of f'; reported, never
  // asserted to be the largest valid one.
  double lipschitz = 0.0;
  for (int probe = 0; probe < 10; ++probe) {
    Vector d = rng.gaussian_vector(f.domain_dim);
    const double nd = d.norm();
    if (nd == 0.0) continue;
    d *= rng.uniform(0.05, 0.2) / nd;
    lipschitz = std::max(lipschitz, spectral_norm(f.jacobian(x0 + d) - pair.t0) / d.norm());
  }
  const double norm_plus = spectral_norm(t0_plus);
  if (lipschitz > 1e-8 && norm_plus > 0.0) {
    pair.valid_radius = std::min(0.5 / (norm_plus * lipschitz), 1e3);
  } else {
    pair.valid_radius = 1e3;  // essentially linear map
  }

  pair.psi = build_psi(f, pair, t0_plus);

  const Vector phi0 = pair.phi(x0);
  const Vector psi0 = pair.psi(Vector::Zero(f.codomain_dim));
  const Vector y0 = f.eval(x0);
  if (phi0.norm() > 1e-10 * (1.0 + x0.norm()) ||
      (psi0 - y0).norm() > 1e-10 * (1.0 + y0.norm())) {
    throw Error("make_conjugacy_pair: chart normalization failed");
  }
  return pair;
}

ConjugacyPair make_conjugacy_pair(const SmoothMap& f, const Vector& x0, Rng& rng) {
  return make_conjugacy_pair(f, x0, mp_inverse(f.jacobian(x0)), rng);
}

double verify_conjugacy(const ConjugacyPair& pair, const SmoothMap& f,
                        const std::vector<Vector>& samples) {
  double max_residual = 0.0;
  for (const Vector& x : samples) {
    const Vector lhs = f.eval(x);
    const Vector rhs = pair.psi(pair.t0 * pair.phi(x));
    max_residual = std::max(max_residual, (lhs - rhs).norm());
  }
  return max_residual;
}

namespace {

std::vector<NamedMap> make_builtin_maps() {
  std::vector<NamedMap> maps;

  {
    auto eval = [](const Vector& p) -> Vector {
      Vector y(2);
      y << p(0), p(0) * p(0);
      return y;
    };
    auto jac = [](const Vector& p) -> Matrix {
      Matrix j(2, 2);
      j << 1.0, 0.0, 2.0 * p(0), 0.0;
      return j;
    };
    maps.push_back({"parabola", make_checked_map(2, 2, eval, jac), Vector::Zero(2), 0.3, true});
  }

  {
    auto eval = [](const Vector& p) -> Vector {
      Vector y(1);
      y << std::sin(p(0));
      return y;
    };
    auto jac = [](const Vector& p) -> Matrix {
      Matrix j(1, 1);
      j << std::cos(p(0));
      return j;
    };
    maps.push_back({"sine", make_checked_map(1, 1, eval, jac), Vector::Zero(1), 0.3, true});
  }

  {
    // Rank of the Jacobian jumps from 1 at the x-axis to 2 off it.
    auto eval = [](const Vector& p) -> Vector {
      Vector y(2);
      y << p(0), p(0) * p(0) + p(1) * p(1);
      return y;
    };
    auto jac = [](const Vector& p) -> Matrix {
      Matrix j(2, 2);
      j << 1.0, 0.0, 2.0 * p(0), 2.0 * p(1);
      return j;
    };
    maps.push_back({"rank-jump", make_checked_map(2, 2, eval, jac), Vector::Zero(2), 0.3,
                    false});
  }

  {
    // Constant-rank-2 polynomial map of R^3: the third component composes the
    // first two, so the Jacobian keeps rank 2 near the origin.
    auto uv = [](const Vector& p) {
      const double x = p(0), y = p(1);
      const double u = x + 0.31 * x * x - 0.17 * x * y + 0.23 * y * y;
      const double v = y - 0.12 * x * x + 0.27 * x * y + 0.08 * y * y;
      return std::pair<double, double>(u, v);
    };
    auto eval = [uv](const Vector& p) -> Vector {
      const auto [u, v] = uv(p);
      Vector y(3);
      y << u, v, 0.6 * u - 0.4 * v + 0.25 * u * u + 0.15 * u * v - 0.10 * v * v;
      return y;
    };
    auto jac = [uv](const Vector& p) -> Matrix {
      const double x = p(0), y = p(1);
      const auto [u, v] = uv(p);
      Eigen::RowVector3d du(1.0 + 0.62 * x - 0.17 * y, -0.17 * x + 0.46 * y, 0.0);
      Eigen::RowVector3d dv(-0.24 * x + 0.27 * y, 1.0 + 0.27 * x + 0.16 * y, 0.0);
      Matrix j(3, 3);
      j.row(0) = du;
      j.row(1) = dv;
      j.row(2) = (0.6 + 0.5 * u + 0.15 * v) * du + (-0.4 + 0.15 * u - 0.2 * v) * dv;
      return j;
    };
    maps.push_back({"poly3", make_checked_map(3, 3, eval, jac), Vector::Zero(3), 0.2, true});
  }

  return maps;
}

}  // namespace

const std::vector<NamedMap>& builtin_maps() {
  static const std::vector<NamedMap> maps = make_builtin_maps();
  return maps;
}

const NamedMap* find_builtin_map(const std::string& name) {
  for (const auto& entry : builtin_maps()) {
    if (entry.name == name) return &entry;
  }
  return nullptr;
}

}  // namespace geninv
