// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "geninv/frobenius.hpp"
#include "geninv/geninv.hpp"
#include "geninv/harness.hpp"
#include "geninv/local_conjugacy.hpp"
#include "geninv/manifold_charts.hpp"
#include "geninv/rng.hpp"
#include "test_support.hpp"

using namespace geninv;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// --------------------------------------------------------------------------
// 1. Penrose residuals on 200 seeded random matrices up to 50x50, < 10 s.

bool criterion_penrose(std::string& detail) {
  const auto start = Clock::now();
  Rng rng(1001);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index m = rng.uniform_int(1, 50);
    const Index n = rng.uniform_int(1, 50);
    const Matrix a = rng.gaussian_matrix(m, n);
    const Matrix ap = mp_inverse(a);
    const double scale =
        1e-10 * (1.0 + spectral_norm(a)) * (1.0 + spectral_norm(ap));
    double residual = spectral_norm(a * ap * a - a);
    residual = std::max(residual, spectral_norm(ap * a * ap - ap));
    residual = std::max(residual, spectral_norm((a * ap).transpose() - a * ap));
    residual = std::max(residual, spectral_norm((ap * a).transpose() - ap * a));
    worst = std::max(worst, residual / scale);
  }
  const double elapsed = seconds_since(start);
  detail = "worst residual ratio " + fmt(worst) + ", " + fmt(elapsed) + " s";
  return worst <= 1.0 && elapsed < 10.0;
}

// --------------------------------------------------------------------------
// 2. Seven-condition equivalence on 1000 seeded triples, zero disagreements.

bool criterion_equivalence(std::string& detail) {
  Rng rng(2002);
  int disagreements = 0;
  int admissible = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto triple = testgen::random_condition_triple(rng);
    const ConditionReport report = check_equivalent_conditions(triple.g, triple.t);
    if (!report.all_equal()) ++disagreements;
    if (report.all_true()) ++admissible;
  }
  detail = std::to_string(disagreements) + " disagreements, " + std::to_string(admissible) +
           "/1000 admissible";
  return disagreements == 0;
}

// --------------------------------------------------------------------------
// 3. Defect identity ||TBT-T|| = ||(I-AA+)C^{-1}T|| to 1e-10 and
//    ||BTB-B|| <= 1e-10 on the same sample set.

bool criterion_defect_identity(std::string& detail) {
  Rng rng(2002);  // same stream as criterion 2
  double worst_gap = 0.0;
  double worst_btb = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto triple = testgen::random_condition_triple(rng);
    const auto [b, residual] = nashed_chen_inverse(triple.g, triple.t);
    const Index m = triple.t.rows();
    const Matrix c =
        Matrix::Identity(m, m) + (triple.t - triple.g.a()) * triple.g.a_plus();
    const Matrix defect = (Matrix::Identity(m, m) - triple.g.a() * triple.g.a_plus()) *
                          c.partialPivLu().solve(triple.t);
    worst_gap = std::max(worst_gap, std::abs(residual - spectral_norm(defect)));
    worst_btb = std::max(worst_btb, spectral_norm(b * triple.t * b - b));
  }
  detail = "norm gap " + fmt(worst_gap) + ", BTB-B " + fmt(worst_btb);
  return worst_gap <= 1e-10 && worst_btb <= 1e-10;
}

// --------------------------------------------------------------------------
// 4. Matrix rank theorem at sweep scale: rank-preserving directions converge
//    monotonically (final <= 1e-5); rank-raising directions diverge with
//    ||(A + t D)+|| >= 0.5 / ||t D|| at every step.

bool criterion_mp_sweep(std::string& detail) {
  Rng rng(4004);
  const std::vector<double> steps = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  double worst_final = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Index m = rng.uniform_int(2, 6);
    const Index n = rng.uniform_int(2, 6);
    const Index r = rng.uniform_int(1, static_cast<int>(std::min(m, n)) - 1);
    Matrix a = Matrix::Zero(m, n);
    for (Index i = 0; i < r; ++i) a(i, i) = rng.uniform(0.8, 2.0);

    const OperatorPoint op = OperatorPoint::moore_penrose(a);
    const Matrix a_plus = op.gen_inv().a_plus();

    // Rank-preserving branch through the inverse chart.
    const OperatorSubspace tangent = tangent_space_basis(op);
    Matrix d = Matrix::Zero(m, n);
    for (const Matrix& b : tangent.basis) d += rng.gaussian() * b;
    d /= spectral_norm(d);
    d *= std::min(1.0, 0.5 * op.gen_inv().ball_radius() / steps.front());
    double previous = std::numeric_limits<double>::infinity();
    double final_error = 0.0;
    for (double t : steps) {
      const Matrix perturbed = chart_inverse(op, a + t * d);
      final_error = spectral_norm(mp_inverse(perturbed) - a_plus);
      if (!(final_error < previous)) {
        detail = "convergence not monotone at t = " + fmt(t);
        return false;
      }
      previous = final_error;
    }
    worst_final = std::max(worst_final, final_error);
    if (final_error > 1e-5) {
      detail = "final error " + fmt(final_error) + " above 1e-5";
      return false;
    }

    // Rank-raising branch.
    const Matrix left = Matrix::Identity(m, m) - a * a_plus;
    const Matrix right = Matrix::Identity(n, n) - a_plus * a;
    Matrix raise = left * rng.gaussian_matrix(m, n) * right;
    raise /= spectral_norm(raise);
    for (double t : steps) {
      const double pinv_norm = spectral_norm(mp_inverse(a + t * raise));
      if (pinv_norm < 0.5 / t) {
        detail = "divergence bound violated at t = " + fmt(t);
        return false;
      }
    }
  }
  detail = "10 samples, worst final error " + fmt(worst_final);
  return true;
}

// --------------------------------------------------------------------------
// 5. Transfer radius: admissibility w.r.t. A+ inside the delta ball implies
//    trivial intersection with N(A_oplus), on 100 seeded quadruples.

bool criterion_transfer(std::string& detail) {
  Rng rng(5005);
  int failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index m = rng.uniform_int(2, 5);
    const Index n = rng.uniform_int(2, 5);
    const Index r =
        rng.uniform_int(1, static_cast<int>(std::max<Index>(std::min(m, n) - 1, 1)));
    const GenInverse g = testgen::random_gen_inverse(rng, m, n, r);
    const GenInverse other = GenInverse::from_complements(
        g.a(), testgen::random_complement(rng, null_space(g.a())),
        testgen::random_complement(rng, range_space(g.a())));
    const double delta = transfer_radius(g, other.a_plus());

    Matrix t;
    for (;;) {
      const double frac = 0.5 * std::min(1.0, delta / g.ball_radius());
      t = testgen::rank_preserving_perturbation(rng, g, frac);
      if (spectral_norm(t - g.a()) < delta && check_equivalent_conditions(g, t).all_true()) {
        break;
      }
    }
    if (subspace_intersection(range_space(t), other.null_of_inverse()).dim() != 0) {
      ++failures;
    }
  }
  detail = std::to_string(failures) + " failures in 100 quadruples";
  return failures == 0;
}

// --------------------------------------------------------------------------
// 6. Adjoint identity ||P^T - P_{E2-perp along E1-perp}|| <= 1e-10 on 500
//    seeded direct-sum pairs in dims 2..8.

bool criterion_adjoint(std::string& detail) {
  Rng rng(6006);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = rng.uniform_int(2, 8);
    const Index d1 = rng.uniform_int(1, static_cast<int>(n) - 1);
    const Subspace e1 = Subspace::from_columns(rng.gaussian_matrix(n, d1));
    const Subspace e2 = testgen::random_complement(rng, e1);
    const auto [p, q] = adjoint_projector(e1, e2);
    worst = std::max(worst, spectral_norm(p.matrix.transpose() - q.matrix));
  }
  detail = "worst deviation " + fmt(worst);
  return worst <= 1e-10;
}

// --------------------------------------------------------------------------
// 7. Local conjugacy on the built-in maps; the rank-jumping counterexample
//    is reported as not locally fine.

bool criterion_conjugacy(std::string& detail) {
  Rng rng(7007);
  std::ostringstream note;
  for (const char* name : {"parabola", "sine", "poly3"}) {
    const NamedMap& entry = *find_builtin_map(name);
    ConjugacyPair pair = make_conjugacy_pair(entry.map, entry.x0, rng);
    const double radius = std::string(name) == "parabola"
                              ? 0.3
                              : std::min(pair.valid_radius, entry.sample_radius);
    std::vector<Vector> samples;
    for (int i = 0; i < 100; ++i) {
      samples.push_back(entry.x0 + rng.ball_point(entry.map.domain_dim, radius));
    }
    const double residual = verify_conjugacy(pair, entry.map, samples);
    note << name << " " << fmt(residual) << "  ";
    if (residual > 1e-8) {
      detail = std::string(name) + " residual " + fmt(residual) + " above 1e-8";
      return false;
    }
  }

  const NamedMap& jump = *find_builtin_map("rank-jump");
  ConjugacyPair pair = make_conjugacy_pair(jump.map, jump.x0, rng);
  std::vector<Vector> samples;
  for (int i = 0; i < 100; ++i) samples.push_back(rng.ball_point(2, 0.3));
  const double jump_residual = verify_conjugacy(pair, jump.map, samples);

  SampledFamily fam;
  fam.points.push_back(jump.x0);
  fam.operators.push_back(pair.t0);
  for (const Vector& x : samples) {
    fam.points.push_back(x);
    fam.operators.push_back(jump.map.jacobian(x));
  }
  const GenInverse g = GenInverse::from_pair(pair.t0, pair.t0_plus);
  const LocalFineReport rep = is_locally_fine(fam, g);
  note << "rank-jump residual " << fmt(jump_residual) << " (reported), locally_fine "
       << (rep.locally_fine ? "true" : "false");
  detail = note.str();
  return !rep.locally_fine;
}

// --------------------------------------------------------------------------
// 8. Fixed-rank dimensions dim M(X) = r(m+n-r), dim E_X = (m-r)(n-r) for all
//    shapes up to 8x8, including the 2x2 paper instance.

bool criterion_dimensions(std::string& detail) {
  Rng rng(8008);
  int checked = 0;
  for (Index m = 1; m <= 8; ++m) {
    for (Index n = 1; n <= 8; ++n) {
      for (Index r = 1; r <= std::min(m, n); ++r) {
        const OperatorPoint p =
            OperatorPoint::moore_penrose(testgen::random_rank_matrix(rng, m, n, r));
        if (tangent_space_basis(p).dim() != r * (m + n - r) ||
            complement_space_basis(p).dim() != (m - r) * (n - r)) {
          detail = "formula failed at m=" + std::to_string(m) + " n=" + std::to_string(n) +
                   " r=" + std::to_string(r);
          return false;
        }
        ++checked;
      }
    }
  }
  Matrix paper_instance = Matrix::Zero(2, 2);
  paper_instance(0, 0) = 1.0;
  const OperatorPoint p = OperatorPoint::moore_penrose(paper_instance);
  if (tangent_space_basis(p).dim() != 3 || complement_space_basis(p).dim() != 1) {
    detail = "2x2 instance dims wrong";
    return false;
  }
  detail = std::to_string(checked) + " (m,n,r) combinations plus the 2x2 instance";
  return true;
}

// --------------------------------------------------------------------------
// 9. Chart diffeomorphism: round trips <= 1e-10 on 200 in-ball samples,
//    derivative matches finite differences to 1e-6, identity at X to 1e-12.

bool criterion_chart(std::string& detail) {
  Rng rng(9009);
  double worst_roundtrip = 0.0, worst_fd = 0.0, worst_identity = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index m = rng.uniform_int(2, 6);
    const Index n = rng.uniform_int(2, 6);
    const Index r = rng.uniform_int(1, static_cast<int>(std::min(m, n)));
    const OperatorPoint op =
        OperatorPoint::moore_penrose(testgen::random_rank_matrix(rng, m, n, r));
    const double ball = op.gen_inv().ball_radius();

    Matrix g = rng.gaussian_matrix(m, n);
    g *= rng.uniform(0.05, 0.9) * ball / spectral_norm(g);
    const Matrix t = op.x() + g;
    const double scale = 1.0 + spectral_norm(t);
    worst_roundtrip = std::max(
        worst_roundtrip,
        spectral_norm(chart_inverse(op, chart_forward(op, t)) - t) / scale);
    worst_roundtrip = std::max(
        worst_roundtrip,
        spectral_norm(chart_forward(op, chart_inverse(op, t)) - t) / scale);

    Matrix dt = rng.gaussian_matrix(m, n);
    dt /= spectral_norm(dt);
    worst_identity = std::max(worst_identity,
                              spectral_norm(chart_derivative(op, op.x(), dt) - dt));

    Matrix g2 = rng.gaussian_matrix(m, n);
    g2 *= rng.uniform(0.05, 0.5) * ball / spectral_norm(g2);
    const Matrix t2 = op.x() + g2;
    const Matrix analytic = chart_derivative(op, t2, dt);
    const double h = 1e-5 * (1.0 + spectral_norm(t2));
    const Matrix fd =
        (chart_forward(op, t2 + h * dt) - chart_forward(op, t2 - h * dt)) / (2.0 * h);
    worst_fd = std::max(worst_fd,
                        spectral_norm(fd - analytic) / (1.0 + spectral_norm(analytic)));
  }
  detail = "roundtrip " + fmt(worst_roundtrip) + ", fd " + fmt(worst_fd) + ", identity " +
           fmt(worst_identity);
  return worst_roundtrip <= 1e-10 && worst_fd <= 1e-6 && worst_identity <= 1e-12;
}

// --------------------------------------------------------------------------
// 10. Circle example: max |psi - sqrt(1-x^2)| <= 1e-6 on |x| <= 0.9 at ode
//     step 1e-3; halving the step improves the error by >= 8x; < 5 s.

bool criterion_circle(std::string& detail) {
  const auto start = Clock::now();
  const NamedFamily& fam = *find_builtin_family("circle");
  const SplitFrame frame =
      make_split_frame(fam.family, fam.x0, Subspace::from_columns(fam.e_star_columns));

  auto max_error = [&](double ode_step) {
    const IntegralPatch patch = integrate_patch(fam.family, frame, 0.9, 1e-2, ode_step);
    double worst = 0.0;
    for (std::size_t i = 0; i < patch.grid.size(); ++i) {
      const double expected = std::sqrt(1.0 - patch.grid[i](0) * patch.grid[i](0));
      worst = std::max(worst, std::abs(patch.psi_values[i](0) - expected));
    }
    return worst;
  };

  const double coarse = max_error(1e-3);
  const double fine = max_error(5e-4);
  const double elapsed = seconds_since(start);
  detail = "error " + fmt(coarse) + ", halved-step error " + fmt(fine) + " (" +
           fmt(coarse / fine) + "x), " + fmt(elapsed) + " s";
  return coarse <= 1e-6 && coarse / fine >= 8.0 && elapsed < 5.0;
}

// --------------------------------------------------------------------------
// 11. Tangency <= 1e-5 for the circle and paraboloid patches; contact-family
//     two-path residual >= 0.1 at (0.5, 0.5).

bool criterion_tangency(std::string& detail) {
  const NamedFamily& circle = *find_builtin_family("circle");
  const SplitFrame cframe =
      make_split_frame(circle.family, circle.x0, Subspace::from_columns(circle.e_star_columns));
  const IntegralPatch cpatch = integrate_patch(circle.family, cframe, 0.9, 1e-3, 1e-3);
  const double circle_angle = verify_tangency(cpatch, circle.family);

  const NamedFamily& par = *find_builtin_family("paraboloid");
  const SplitFrame pframe =
      make_split_frame(par.family, par.x0, Subspace::from_columns(par.e_star_columns));
  const IntegralPatch ppatch = integrate_patch(par.family, pframe, 0.5, 0.05, 1e-3);
  const double par_angle = verify_tangency(ppatch, par.family);

  const NamedFamily& contact = *find_builtin_family("contact");
  const SplitFrame kframe = make_split_frame(contact.family, contact.x0,
                                             Subspace::from_columns(contact.e_star_columns));
  Vector target(2), corner1(2), corner2(2);
  target << 0.5, 0.5;
  corner1 << 0.5, 0.0;
  corner2 << 0.0, 0.5;
  const double residual = integrability_residual(
      contact.family, kframe, target, {Vector::Zero(2), corner1, target},
      {Vector::Zero(2), corner2, target}, 1e-3);

  detail = "circle angle " + fmt(circle_angle) + ", paraboloid angle " + fmt(par_angle) +
           ", contact residual " + fmt(residual);
  return circle_angle <= 1e-5 && par_angle <= 1e-5 && residual >= 0.1;
}

// --------------------------------------------------------------------------
// 12. Determinism: identical config and seed give byte-identical reports.

std::string slurp(const fs::path& path) {
  std::ifstream is(path);
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return buffer.str();
}

bool criterion_determinism(std::string& detail) {
  const fs::path base = fs::temp_directory_path() / "geninv_acceptance_det";
  fs::remove_all(base);

  ExperimentConfig chart_cfg;
  chart_cfg.experiment = "chart";
  chart_cfg.inputs["rows"] = 5;
  chart_cfg.inputs["cols"] = 4;
  chart_cfg.inputs["rank"] = 2;
  chart_cfg.inputs["samples"] = 100;
  chart_cfg.seed = 20240817;

  ExperimentConfig frob_cfg;
  frob_cfg.experiment = "frobenius";
  frob_cfg.inputs["family"] = "circle";
  frob_cfg.inputs["radius"] = 0.45;
  frob_cfg.inputs["grid_step"] = 0.05;
  frob_cfg.seed = 7;

  bool identical = true;
  for (int round = 0; round < 2; ++round) {
    chart_cfg.output_path = (base / ("chart" + std::to_string(round))).string();
    frob_cfg.output_path = (base / ("frob" + std::to_string(round))).string();
    run_experiment(chart_cfg);
    run_experiment(frob_cfg);
  }
  identical = identical && slurp(base / "chart0" / "report.json") ==
                               slurp(base / "chart1" / "report.json");
  identical = identical && slurp(base / "frob0" / "report.json") ==
                               slurp(base / "frob1" / "report.json");
  identical = identical &&
              slurp(base / "frob0" / "patch.csv") == slurp(base / "frob1" / "patch.csv");
  identical = identical && !slurp(base / "chart0" / "report.json").empty();
  fs::remove_all(base);
  detail = identical ? "chart and frobenius reports byte-identical" : "reports differ";
  return identical;
}

struct Criterion {
  int id;
  const char* name;
  std::function<bool(std::string&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Penrose residuals on 200 random matrices up to 50x50", criterion_penrose},
      {2, "seven-condition equivalence on 1000 triples", criterion_equivalence},
      {3, "defect identity and BTB=B at 1e-10", criterion_defect_identity},
      {4, "mp-sweep convergence and divergence", criterion_mp_sweep},
      {5, "transfer radius on 100 quadruples", criterion_transfer},
      {6, "adjoint projector identity on 500 pairs", criterion_adjoint},
      {7, "local conjugacy on built-in maps", criterion_conjugacy},
      {8, "fixed-rank manifold dimensions up to 8x8", criterion_dimensions},
      {9, "chart round trip and derivative", criterion_chart},
      {10, "Frobenius circle example with step halving", criterion_circle},
      {11, "tangency and contact-family residual", criterion_tangency},
      {12, "byte-identical reports for a fixed seed", criterion_determinism},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    std::string detail;
    bool passed = false;
    try {
      passed = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %2d: %s%s%s\n", passed ? "PASS" : "FAIL", criterion.id,
                criterion.name, detail.empty() ? "" : " -- ", detail.c_str());
    if (!passed) ++failures;
  }
  if (failures == 0) {
    std::printf("all %zu criteria passed\n", criteria.size());
  } else {
    std::printf("%d criteria FAILED\n", failures);
  }
  return failures;
}
