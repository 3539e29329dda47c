#pragma once

#include <cstdint>
#include <random>

#include "geninv/matrix.hpp"

namespace geninv {

// Deterministic random source. Distributions are implemented by hand so that
// a seed pins the byte-exact stream independently of the standard library's
// internals; experiment reports rely on this for reproducible reruns.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform() * static_cast<double>(hi - lo + 1));
  }

  /// Standard normal via the polar method.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  Vector gaussian_vector(Index n) {
    Vector x(n);
    for (Index i = 0; i < n; ++i) x(i) = gaussian();
    return x;
  }

  Matrix gaussian_matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = gaussian();
    return m;
  }

  /// Uniform point in the closed ball of the given radius.
  Vector ball_point(Index n, double radius) {
    Vector d = gaussian_vector(n);
    const double nrm = d.norm();
    if (nrm == 0.0) return Vector::Zero(n);
    const double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(n));
    return (r / nrm) * d;
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace geninv
