#include <doctest.h>

#include <cmath>

#include "geninv/errors.hpp"
#include "geninv/manifold_charts.hpp"
#include "test_support.hpp"

using namespace geninv;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Matrix unit(Index rows, Index cols, Index i, Index j) {
  Matrix m = Matrix::Zero(rows, cols);
  m(i, j) = 1.0;
  return m;
}

// Image-form basis of the tangent space: orthonormalized images of the
// canonical units under T -> XX+ T + (I - XX+) T X+X. Independent of the
// kernel construction used by the library.
OperatorSubspace tangent_by_image_form(const OperatorPoint& p) {
  const Index m = p.rows(), n = p.cols();
  const Matrix left = Matrix::Identity(m, m) - p.xxp();
  Matrix cols(m * n, m * n);
  Index col = 0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i, ++col) {
      const Matrix image = p.xxp() * unit(m, n, i, j) + left * unit(m, n, i, j) * p.xpx();
      cols.col(col) = Eigen::Map<const Vector>(image.data(), m * n);
    }
  }
  const Subspace span = Subspace::from_columns(cols);
  OperatorSubspace out;
  out.rows = m;
  out.cols = n;
  for (Index k = 0; k < span.dim(); ++k) {
    out.basis.push_back(Eigen::Map<const Matrix>(span.basis().col(k).data(), m, n));
  }
  return out;
}

double subspace_gap(const OperatorSubspace& a, const OperatorSubspace& b) {
  double worst = 0.0;
  for (const Matrix& m : a.basis) worst = std::max(worst, operator_subspace_residual(b, m));
  for (const Matrix& m : b.basis) worst = std::max(worst, operator_subspace_residual(a, m));
  return worst;
}

}  // namespace

TEST_CASE("tangent space dimensions on the worked instances") {
  {
    const OperatorPoint p = OperatorPoint::moore_penrose(diag2(1, 0));
    CHECK(tangent_space_basis(p).dim() == 3);
  }
  {
    Matrix inv(2, 2);
    inv << 2, 1, 1, 1;
    const OperatorPoint p = OperatorPoint::moore_penrose(inv);
    CHECK(tangent_space_basis(p).dim() == 4);
  }
  {
    Rng rng(101);
    const Matrix x = testgen::random_rank_matrix(rng, 5, 4, 2);
    const OperatorPoint p = OperatorPoint::moore_penrose(x);
    CHECK(tangent_space_basis(p).dim() == 2 * (5 + 4 - 2));
  }
}

TEST_CASE("tangent space agrees with the image form") {
  Rng rng(103);
  for (int trial = 0; trial < 20; ++trial) {
    const Index m = rng.uniform_int(2, 5);
    const Index n = rng.uniform_int(2, 5);
    const Index r = rng.uniform_int(1, static_cast<int>(std::min(m, n)));
    const OperatorPoint p =
        OperatorPoint::moore_penrose(testgen::random_rank_matrix(rng, m, n, r));
    const OperatorSubspace kernel_form = tangent_space_basis(p);
    const OperatorSubspace image_form = tangent_by_image_form(p);
    CHECK(kernel_form.dim() == image_form.dim());
    CHECK(subspace_gap(kernel_form, image_form) <= 1e-10);
  }
}

TEST_CASE("tangent membership: T N(X) inside R(X)") {
  Rng rng(107);
  const Matrix x = testgen::random_rank_matrix(rng, 4, 5, 2);
  const OperatorPoint p = OperatorPoint::moore_penrose(x);
  const Subspace nx = null_space(x);
  const Subspace rx = range_space(x);
  for (const Matrix& b : tangent_space_basis(p).basis) {
    const Subspace image = Subspace::from_columns(b * nx.basis());
    CHECK(containment_angle(image, rx) <= 1e-8);
  }
}

TEST_CASE("complement space on the worked instances") {
  {
    const OperatorPoint p = OperatorPoint::moore_penrose(diag2(1, 0));
    const OperatorSubspace comp = complement_space_basis(p);
    CHECK(comp.dim() == 1);
    CHECK(std::abs(std::abs(comp.basis[0](1, 1)) - 1.0) <= 1e-12);
  }
  {
    Matrix inv(2, 2);
    inv << 2, 1, 1, 1;
    CHECK(complement_space_basis(OperatorPoint::moore_penrose(inv)).dim() == 0);
  }
  {
    Rng rng(109);
    const OperatorPoint p =
        OperatorPoint::moore_penrose(testgen::random_rank_matrix(rng, 4, 4, 2));
    const OperatorSubspace tangent = tangent_space_basis(p);
    const OperatorSubspace comp = complement_space_basis(p);
    CHECK(comp.dim() == 4);
    CHECK(tangent.dim() + comp.dim() == 16);
    // Direct sum of the vectorized subspaces.
    Matrix tb(16, tangent.dim()), cb(16, comp.dim());
    for (Index k = 0; k < tangent.dim(); ++k) {
      tb.col(k) = Eigen::Map<const Vector>(tangent.basis[k].data(), 16);
    }
    for (Index k = 0; k < comp.dim(); ++k) {
      cb.col(k) = Eigen::Map<const Vector>(comp.basis[k].data(), 16);
    }
    CHECK(is_direct_sum(Subspace::from_columns(tb), Subspace::from_columns(cb)));
  }
}

TEST_CASE("complement elements have range in N(X+) and kill R(X+)") {
  Rng rng(113);
  const OperatorPoint p =
      OperatorPoint::moore_penrose(testgen::random_rank_matrix(rng, 5, 4, 2));
  const Subspace n_plus = p.gen_inv().null_of_inverse();
  const Subspace r_plus = p.gen_inv().range_of_inverse();
  for (const Matrix& b : complement_space_basis(p).basis) {
    CHECK(containment_angle(range_space(b), n_plus) <= 1e-8);
    CHECK(spectral_norm(b * r_plus.basis()) <= 1e-10);
  }
}

TEST_CASE("decompose_operator") {
  {
    Matrix inv(2, 2);
    inv << 2, 1, 1, 1;
    Rng rng(127);
    const Matrix t = rng.gaussian_matrix(2, 2);
    const auto d = decompose_operator(OperatorPoint::moore_penrose(inv), t);
    CHECK(spectral_norm(d.part1 - t) <= 1e-12);
    CHECK(spectral_norm(d.part2) <= 1e-12);
    CHECK(spectral_norm(d.part3) <= 1e-12);
  }
  {
    const OperatorPoint p = OperatorPoint::moore_penrose(diag2(1, 0));
    const auto d = decompose_operator(p, unit(2, 2, 1, 1));
    CHECK(spectral_norm(d.part1) <= 1e-12);
    CHECK(spectral_norm(d.part2) <= 1e-12);
    CHECK(spectral_norm(d.part3 - unit(2, 2, 1, 1)) <= 1e-12);
  }
  {
    Rng rng(131);
    for (int trial = 0; trial < 30; ++trial) {
      const Index m = rng.uniform_int(2, 6);
      const Index n = rng.uniform_int(2, 6);
      const Index r = rng.uniform_int(1, static_cast<int>(std::min(m, n)));
      const GenInverse g = testgen::random_gen_inverse(rng, m, n, r);
      const OperatorPoint p(g);
      const Matrix t = rng.gaussian_matrix(m, n);
      const auto d = decompose_operator(p, t);
      CHECK(spectral_norm(d.part1 + d.part2 + d.part3 - t) <= 1e-12 * (1.0 + spectral_norm(t)));
      const OperatorSubspace tangent = tangent_space_basis(p);
      const OperatorSubspace comp = complement_space_basis(p);
      CHECK(operator_subspace_residual(tangent, d.part1 + d.part2) <= 1e-9);
      CHECK(operator_subspace_residual(comp, d.part3) <= 1e-9);
    }
  }
}

TEST_CASE("chart_forward worked instances") {
  const OperatorPoint p = OperatorPoint::moore_penrose(diag2(1, 0));
  CHECK(spectral_norm(chart_forward(p, diag2(1, 0)) - diag2(1, 0)) <= 1e-14);
  {
    // T = [[1,0],[s,0]] is fixed by the chart and lies in M(X).
    Matrix t(2, 2);
    t << 1, 0, 0.4, 0;
    CHECK(spectral_norm(chart_forward(p, t) - t) <= 1e-12);
  }
  {
    // T = diag(1, t): C is the identity and the first term vanishes.
    const Matrix t = diag2(1, 0.3);
    CHECK(spectral_norm(chart_forward(p, t) - t) <= 1e-12);
  }
  CHECK_THROWS_AS(chart_forward(p, diag2(2.5, 0)), NeighborhoodError);
}

TEST_CASE("chart_inverse worked instances and round trips") {
  const OperatorPoint p = OperatorPoint::moore_penrose(diag2(1, 0));
  CHECK(spectral_norm(chart_inverse(p, diag2(1, 0)) - diag2(1, 0)) <= 1e-14);
  {
    Matrix m(2, 2);
    m << 1, 0, 0.4, 0;
    const Matrix t = chart_inverse(p, m);
    CHECK(spectral_norm(chart_forward(p, t) - m) <= 1e-12);
    CHECK(spectral_norm(t - m) <= 1e-12);  // this chart point is its own preimage
  }

  Rng rng(137);
  for (int trial = 0; trial < 200; ++trial) {
    const Index m = rng.uniform_int(2, 6);
    const Index n = rng.uniform_int(2, 6);
    const Index r = rng.uniform_int(1, static_cast<int>(std::min(m, n)));
    const OperatorPoint op =
        OperatorPoint::moore_penrose(testgen::random_rank_matrix(rng, m, n, r));
    Matrix g = rng.gaussian_matrix(m, n);
    g *= rng.uniform(0.05, 0.9) * op.gen_inv().ball_radius() / spectral_norm(g);
    const Matrix t = op.x() + g;
    const Matrix roundtrip1 = chart_inverse(op, chart_forward(op, t));
    CHECK(spectral_norm(roundtrip1 - t) <= 1e-10 * (1.0 + spectral_norm(t)));
    const Matrix roundtrip2 = chart_forward(op, chart_inverse(op, t));
    CHECK(spectral_norm(roundtrip2 - t) <= 1e-10 * (1.0 + spectral_norm(t)));
  }
}

TEST_CASE("chart_derivative") {
  Rng rng(139);
  const OperatorPoint p =
      OperatorPoint::moore_penrose(testgen::random_rank_matrix(rng, 4, 4, 2));
  const double ball = p.gen_inv().ball_radius();

  // Identity at the base point.
  for (int i = 0; i < 20; ++i) {
    Matrix dt = rng.gaussian_matrix(4, 4);
    dt /= spectral_norm(dt);
    CHECK(spectral_norm(chart_derivative(p, p.x(), dt) - dt) <= 1e-12);
  }

  // Finite differences and homogeneity away from the base point.
  for (int i = 0; i < 10; ++i) {
    Matrix g = rng.gaussian_matrix(4, 4);
    g *= rng.uniform(0.05, 0.5) * ball / spectral_norm(g);
    const Matrix t = p.x() + g;
    Matrix dt = rng.gaussian_matrix(4, 4);
    dt /= spectral_norm(dt);

    const Matrix analytic = chart_derivative(p, t, dt);
    const double h = 1e-5 * (1.0 + spectral_norm(t));
    const Matrix fd =
        (chart_forward(p, t + h * dt) - chart_forward(p, t - h * dt)) / (2.0 * h);
    CHECK(spectral_norm(fd - analytic) <= 1e-6 * (1.0 + spectral_norm(analytic)));

    const double alpha = rng.uniform(-3.0, 3.0);
    CHECK(spectral_norm(chart_derivative(p, t, alpha * dt) - alpha * analytic) <=
          1e-12 * (1.0 + std::abs(alpha) * spectral_norm(analytic)));
  }
}

TEST_CASE("verify_chart_maps_manifold") {
  Rng rng(149);
  {
    const auto rep = verify_chart_maps_manifold(OperatorPoint::moore_penrose(diag2(1, 0)),
                                                100, rng);
    CHECK(rep.all_pass);
  }
  {
    Matrix inv(2, 2);
    inv << 2, 1, 1, 1;
    const auto rep = verify_chart_maps_manifold(OperatorPoint::moore_penrose(inv), 50, rng);
    CHECK(rep.all_pass);
  }
  {
    const OperatorPoint p =
        OperatorPoint::moore_penrose(testgen::random_rank_matrix(rng, 5, 4, 2));
    const auto rep = verify_chart_maps_manifold(p, 100, rng);
    CHECK(rep.all_pass);
    CHECK(rep.roundtrip_max_residual <= 1e-10);
    CHECK(rep.forward_membership_max_residual <= 1e-8);
  }
}

TEST_CASE("curve velocities realize the tangent space") {
  Rng rng(151);
  const OperatorPoint p =
      OperatorPoint::moore_penrose(testgen::random_rank_matrix(rng, 4, 3, 2));
  const OperatorSubspace tangent = tangent_space_basis(p);
  const double h = 1e-4 * p.gen_inv().ball_radius();

  // Velocities of inverse-chart curves stay tangent, and every basis element
  // is itself such a velocity (the chart derivative at X is the identity).
  for (int i = 0; i < 10; ++i) {
    Matrix d = Matrix::Zero(4, 3);
    for (const Matrix& b : tangent.basis) d += rng.gaussian() * b;
    d /= spectral_norm(d);
    const Matrix vel = (chart_inverse(p, p.x() + h * d) - chart_inverse(p, p.x() - h * d)) /
                       (2.0 * h);
    CHECK(operator_subspace_residual(tangent, vel) <= 1e-6);
  }
  for (const Matrix& b : tangent.basis) {
    const Matrix vel = (chart_inverse(p, p.x() + h * b) - chart_inverse(p, p.x() - h * b)) /
                       (2.0 * h);
    CHECK((vel - b).norm() / (1.0 + b.norm()) <= 1e-6);
  }
}

TEST_CASE("inverse-chart points satisfy the seven conditions") {
  Rng rng(157);
  const OperatorPoint p =
      OperatorPoint::moore_penrose(testgen::random_rank_matrix(rng, 4, 4, 2));
  const OperatorSubspace tangent = tangent_space_basis(p);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix d = Matrix::Zero(4, 4);
    for (const Matrix& b : tangent.basis) d += rng.gaussian() * b;
    d /= spectral_norm(d);
    // Moderate radius keeps the preimage inside the literal perturbation
    // ball that the condition checks require.
    const Matrix m = p.x() + rng.uniform(0.05, 0.5) * p.gen_inv().ball_radius() * d;
    const Matrix t = chart_inverse(p, m);
    const ConditionReport report = check_equivalent_conditions(p.gen_inv(), t);
    CHECK(report.all_true());
  }
}

TEST_CASE("tangent and complement dimensions match the rank formulas") {
  Rng rng(163);
  for (Index m = 1; m <= 8; ++m) {
    for (Index n = 1; n <= 8; ++n) {
      const Index r = rng.uniform_int(1, static_cast<int>(std::min(m, n)));
      const OperatorPoint p =
          OperatorPoint::moore_penrose(testgen::random_rank_matrix(rng, m, n, r));
      CHECK(tangent_space_basis(p).dim() == r * (m + n - r));
      CHECK(complement_space_basis(p).dim() == (m - r) * (n - r));
    }
  }
}
