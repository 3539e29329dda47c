#include <benchmark/benchmark.h>

#include "geninv/frobenius.hpp"
#include "geninv/geninv.hpp"
#include "geninv/manifold_charts.hpp"
#include "geninv/rng.hpp"

using namespace geninv;

namespace {

Matrix sized_random(Index n, std::uint64_t seed) {
  Rng rng(seed);
  return rng.gaussian_matrix(n, n);
}

void BM_MpInverse(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix a = sized_random(n, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mp_inverse(a));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_MpInverse)->Arg(8)->Arg(16)->Arg(32)->Arg(50)->Complexity();

void BM_ObliqueProjector(benchmark::State& state) {
  const Index n = state.range(0);
  Rng rng(2);
  const Subspace s1 = Subspace::from_columns(rng.gaussian_matrix(n, n / 2));
  const Subspace s2 = orthogonal_complement(s1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oblique_projector(s1, s2));
  }
}
BENCHMARK(BM_ObliqueProjector)->Arg(4)->Arg(8);

void BM_NashedChen(benchmark::State& state) {
  Rng rng(3);
  Matrix a = Matrix::Zero(6, 6);
  for (Index i = 0; i < 3; ++i) a(i, i) = 1.0 + 0.1 * static_cast<double>(i);
  const GenInverse g = GenInverse::moore_penrose(a);
  Matrix d = rng.gaussian_matrix(6, 6);
  d *= 0.2 * g.ball_radius() / spectral_norm(d);
  const Matrix t = a + d;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nashed_chen_inverse(g, t));
  }
}
BENCHMARK(BM_NashedChen);

void BM_ConditionReport(benchmark::State& state) {
  Rng rng(4);
  Matrix a = Matrix::Zero(5, 5);
  for (Index i = 0; i < 2; ++i) a(i, i) = 1.0;
  const GenInverse g = GenInverse::moore_penrose(a);
  Matrix d = rng.gaussian_matrix(5, 5);
  d *= 0.2 * g.ball_radius() / spectral_norm(d);
  const Matrix t = a + d;
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_equivalent_conditions(g, t));
  }
}
BENCHMARK(BM_ConditionReport);

void BM_ChartRoundTrip(benchmark::State& state) {
  const Index n = state.range(0);
  Rng rng(5);
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i < n / 2; ++i) a(i, i) = 1.0;
  const OperatorPoint op = OperatorPoint::moore_penrose(a);
  Matrix d = rng.gaussian_matrix(n, n);
  d *= 0.4 * op.gen_inv().ball_radius() / spectral_norm(d);
  const Matrix t = a + d;
  for (auto _ : state) {
    benchmark::DoNotOptimize(chart_inverse(op, chart_forward(op, t)));
  }
}
BENCHMARK(BM_ChartRoundTrip)->Arg(4)->Arg(8);

void BM_TangentBasis(benchmark::State& state) {
  const Index n = state.range(0);
  Rng rng(6);
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i < n / 2; ++i) a(i, i) = 1.0 + 0.2 * static_cast<double>(i);
  const OperatorPoint op = OperatorPoint::moore_penrose(a);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tangent_space_basis(op));
  }
}
BENCHMARK(BM_TangentBasis)->Arg(4)->Arg(6)->Arg(8);

void BM_CirclePatch(benchmark::State& state) {
  const NamedFamily& fam = *find_builtin_family("circle");
  const SplitFrame frame =
      make_split_frame(fam.family, fam.x0, Subspace::from_columns(fam.e_star_columns));
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_patch(fam.family, frame, 0.3, 0.05, 1e-3));
  }
}
BENCHMARK(BM_CirclePatch);

}  // namespace

BENCHMARK_MAIN();
