#pragma once

#include <functional>
#include <string>
#include <vector>

#include "geninv/geninv.hpp"
#include "geninv/rng.hpp"

namespace geninv {

// A C^1 map given by evaluation and Jacobian rules. Rules must be safe for
// concurrent invocation.
struct SmoothMap {
  Index domain_dim = 0;
  Index codomain_dim = 0;
  std::function<Vector(const Vector&)> eval;
  std::function<Matrix(const Vector&)> jacobian;
};

/// Builds a SmoothMap and spot-checks the Jacobian against central finite
/// differences (3 points, step 1e-6, relative error 1e-5). Throws
/// std::invalid_argument on mismatch.
SmoothMap make_checked_map(Index domain_dim, Index codomain_dim,
                           std::function<Vector(const Vector&)> eval,
                           std::function<Matrix(const Vector&)> jacobian);

// Normal-form charts for f near x0: phi straightens the domain, psi the
// codomain, and f factors through its derivative at x0 between them.
struct ConjugacyPair {
  Vector x0;
  Matrix t0;       // f'(x0)
  Matrix t0_plus;  // a generalized inverse of t0
  std::function<Vector(const Vector&)> phi;
  std::function<Vector(const Vector&)> psi;
  double valid_radius = 0.0;  // heuristic working radius, reported not asserted
};

/// phi(x) = T0+ (f(x) - f(x0)) + (I - T0+ T0)(x - x0). Throws NotAGenInverse
/// when t0_plus fails the defining equations for f'(x0).
std::function<Vector(const Vector&)> build_phi(const SmoothMap& f, const Vector& x0,
                                               const Matrix& t0_plus);

/// Newton solve of phi(x) = y started at x0 + y (phi'(x0) is the identity).
Vector invert_phi(const ConjugacyPair& pair, const SmoothMap& f, const Vector& y,
                  double tol = 1e-12, int max_iter = 50);

/// psi(y) = (f ∘ phi^{-1} ∘ T0+)(y) + (I - T0 T0+) y. The returned rule
/// propagates invert_phi errors.
std::function<Vector(const Vector&)> build_psi(const SmoothMap& f, const ConjugacyPair& partial,
                                               const Matrix& t0_plus);

ConjugacyPair make_conjugacy_pair(const SmoothMap& f, const Vector& x0, const Matrix& t0_plus,
                                  Rng& rng);

/// Uses the Moore-Penrose inverse of f'(x0).
ConjugacyPair make_conjugacy_pair(const SmoothMap& f, const Vector& x0, Rng& rng);

/// max over samples of || f(x) - psi(T0 phi(x)) ||.
double verify_conjugacy(const ConjugacyPair& pair, const SmoothMap& f,
                        const std::vector<Vector>& samples);

struct NamedMap {
  std::string name;
  SmoothMap map;
  Vector x0;
  double sample_radius;
  bool constant_rank;  // rank of the Jacobian is constant near x0
};

const std::vector<NamedMap>& builtin_maps();

/// nullptr when the name is not registered.
const NamedMap* find_builtin_map(const std::string& name);

}  // namespace geninv
