#include "geninv/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "geninv/errors.hpp"
#include "geninv/local_conjugacy.hpp"
#include "geninv/manifold_charts.hpp"
#include "geninv/rng.hpp"
#include "geninv/version.hpp"

namespace geninv {

namespace {

namespace fs = std::filesystem;

const Json& need_input(const Json& inputs, const char* name) {
  if (!inputs.contains(name)) {
    throw ParseError("missing required input \"" + std::string(name) + "\"");
  }
  return inputs[name];
}

double number_or(const Json& inputs, const char* name, double dflt) {
  if (!inputs.contains(name)) return dflt;
  if (!inputs[name].is_number()) {
    throw ParseError("input \"" + std::string(name) + "\" must be a number");
  }
  return inputs[name].get<double>();
}

int int_or(const Json& inputs, const char* name, int dflt) {
  if (!inputs.contains(name)) return dflt;
  if (!inputs[name].is_number_integer()) {
    throw ParseError("input \"" + std::string(name) + "\" must be an integer");
  }
  return inputs[name].get<int>();
}

std::string string_or(const Json& inputs, const char* name, const std::string& dflt) {
  if (!inputs.contains(name)) return dflt;
  if (!inputs[name].is_string()) {
    throw ParseError("input \"" + std::string(name) + "\" must be a string");
  }
  return inputs[name].get<std::string>();
}

Vector vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError(field + " must be an array of numbers");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(field + " must contain only numbers");
    v(static_cast<Index>(i)) = j[i].get<double>();
  }
  return v;
}

Json vector_to_json(const Vector& v) {
  Json j = Json::array();
  for (Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

void write_text_file(const fs::path& path, const std::string& content,
                     std::vector<std::string>& files) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open output file " + path.string());
  os << content;
  files.push_back(path.string());
}

Matrix random_rank_matrix(Rng& rng, Index rows, Index cols, Index rank) {
  // Controlled spectrum keeps the perturbation ball a usable size.
  Eigen::HouseholderQR<Matrix> qu(rng.gaussian_matrix(rows, rows));
  Eigen::HouseholderQR<Matrix> qv(rng.gaussian_matrix(cols, cols));
  const Matrix u = Matrix(qu.householderQ()).leftCols(rank);
  const Matrix v = Matrix(qv.householderQ()).leftCols(rank);
  Vector sigma(rank);
  for (Index i = 0; i < rank; ++i) sigma(i) = rng.uniform(0.8, 2.0);
  return u * sigma.asDiagonal() * v.transpose();
}

Matrix random_tangent_direction(const OperatorPoint& op, const OperatorSubspace& tangent,
                                Rng& rng) {
  Matrix d = Matrix::Zero(op.rows(), op.cols());
  for (const Matrix& b : tangent.basis) d += rng.gaussian() * b;
  const double nd = spectral_norm(d);
  if (nd < 1e-14) return d;
  return d / nd;
}

// ---------------------------------------------------------------------------
// mp-sweep

std::pair<Json, bool> run_mp_sweep(const ExperimentConfig& cfg,
                                   const EffectiveTolerances& tols, Rng& rng,
                                   const fs::path& outdir, std::vector<std::string>& files,
                                   bool check) {
  const Matrix a = matrix_from_json(need_input(cfg.inputs, "A"), "inputs.A");
  const std::string mode = string_or(cfg.inputs, "mode", "given");

  std::vector<double> steps;
  if (cfg.inputs.contains("steps")) {
    for (const auto& s : cfg.inputs["steps"]) steps.push_back(s.get<double>());
  } else {
    steps = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  }

  std::vector<SweepRow> rows;
  std::vector<double> pinv_norms;
  bool bound_ok = true;

  if (mode == "given") {
    const Matrix dir = matrix_from_json(need_input(cfg.inputs, "direction"), "inputs.direction");
    rows = mp_convergence_experiment(a, dir, steps, tols.rank_tol);
  } else if (mode == "tangent") {
    // Rank-preserving perturbations through the inverse chart.
    const OperatorPoint op = OperatorPoint::moore_penrose(a, tols.rank_tol);
    const OperatorSubspace tangent = tangent_space_basis(op, tols.rank_tol);
    Matrix d = random_tangent_direction(op, tangent, rng);
    const double scale =
        std::min(1.0, 0.5 * (1.0 - tols.margin) * op.gen_inv().ball_radius() / steps.front());
    d *= scale;
    const Matrix base_inv = mp_inverse(a, tols.rank_tol);
    for (double t : steps) {
      const Matrix perturbed = chart_inverse(op, a + t * d, tols.margin);
      rows.push_back({t, rank_of(perturbed, tols.rank_tol),
                      spectral_norm(mp_inverse(perturbed, tols.rank_tol) - base_inv)});
    }
  } else if (mode == "rank-raising") {
    // Directions (I - AA+) G (I - A+A) raise the rank for every t > 0.
    const Matrix a_plus = mp_inverse(a, tols.rank_tol);
    const Matrix left = Matrix::Identity(a.rows(), a.rows()) - a * a_plus;
    const Matrix right = Matrix::Identity(a.cols(), a.cols()) - a_plus * a;
    Matrix d = left * rng.gaussian_matrix(a.rows(), a.cols()) * right;
    const double nd = spectral_norm(d);
    if (nd < 1e-12) {
      throw std::invalid_argument("mp-sweep: operator has no rank-raising directions");
    }
    d /= nd;
    const Matrix base_inv = mp_inverse(a, tols.rank_tol);
    for (double t : steps) {
      const Matrix perturbed = a + t * d;
      const Matrix pinv = mp_inverse(perturbed, tols.rank_tol);
      rows.push_back({t, rank_of(perturbed, tols.rank_tol),
                      spectral_norm(pinv - base_inv)});
      const double norm_pinv = spectral_norm(pinv);
      pinv_norms.push_back(norm_pinv);
      if (norm_pinv < 0.5 / t) bound_ok = false;
    }
  } else {
    throw ParseError("input \"mode\" must be one of given, tangent, rank-raising");
  }

  bool monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].mp_error < rows[i - 1].mp_error)) monotone = false;
  }

  Json table = Json::array();
  for (const auto& row : rows) {
    table.push_back({{"t", row.t}, {"rank", row.rank}, {"mp_error", row.mp_error}});
  }
  Json summary;
  summary["mode"] = mode;
  summary["rows"] = table;
  summary["monotone_decreasing"] = monotone;
  summary["final_error"] = rows.empty() ? 0.0 : rows.back().mp_error;
  if (!pinv_norms.empty()) {
    summary["pinv_norms"] = pinv_norms;
    summary["divergence_bound_ok"] = bound_ok;
  }

  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  write_text_file(outdir / "table.csv", csv.str(), files);

  bool passed = true;
  if (check) {
    if (mode == "tangent") {
      passed = monotone && !rows.empty() && rows.back().mp_error <= 1e-5;
    } else if (mode == "rank-raising") {
      passed = bound_ok;
    }
  }
  return {summary, passed};
}

// ---------------------------------------------------------------------------
// conditions

std::pair<Json, bool> run_conditions(const ExperimentConfig& cfg,
                                     const EffectiveTolerances& tols, Rng&,
                                     const fs::path&, std::vector<std::string>&, bool check) {
  const Matrix a = matrix_from_json(need_input(cfg.inputs, "A"), "inputs.A");
  const Matrix t = matrix_from_json(need_input(cfg.inputs, "T"), "inputs.T");

  GenInverse g = [&]() {
    if (cfg.inputs.contains("R_plus") || cfg.inputs.contains("N_plus")) {
      const Subspace r_plus =
          subspace_from_json(need_input(cfg.inputs, "R_plus"), "inputs.R_plus");
      const Subspace n_plus =
          subspace_from_json(need_input(cfg.inputs, "N_plus"), "inputs.N_plus");
      return GenInverse::from_complements(a, r_plus, n_plus, tols.rank_tol);
    }
    return GenInverse::moore_penrose(a, tols.rank_tol);
  }();

  const ConditionReport report = check_equivalent_conditions(g, t, tols.margin, tols.rank_tol);
  Json summary;
  summary["conditions"] = condition_report_to_json(report);
  summary["all_equal"] = report.all_equal();
  summary["all_true"] = report.all_true();
  summary["rank_of_A"] = g.rank();
  summary["rank_of_T"] = rank_of(t, tols.rank_tol);
  return {summary, check ? report.all_equal() : true};
}

// ---------------------------------------------------------------------------
// conjugacy

std::pair<Json, bool> run_conjugacy(const ExperimentConfig& cfg,
                                    const EffectiveTolerances& tols, Rng& rng, const fs::path&,
                                    std::vector<std::string>&, bool check) {
  const std::string name = string_or(cfg.inputs, "map", "");
  const NamedMap* entry = find_builtin_map(name);
  if (entry == nullptr) {
    throw ParseError("input \"map\" must name a built-in map (see the list subcommand)");
  }
  const Vector x0 = cfg.inputs.contains("x0")
                        ? vector_from_json(cfg.inputs["x0"], "inputs.x0")
                        : entry->x0;
  const int samples = int_or(cfg.inputs, "samples", 100);
  const double radius = number_or(cfg.inputs, "radius", entry->sample_radius);

  const SmoothMap& f = entry->map;
  ConjugacyPair pair = make_conjugacy_pair(f, x0, rng);

  std::vector<Vector> sample_points;
  sample_points.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    sample_points.push_back(x0 + rng.ball_point(f.domain_dim, radius));
  }
  const double max_residual = verify_conjugacy(pair, f, sample_points);

  // Locally-fine verdict on the sampled Jacobian family, base first.
  const GenInverse g = GenInverse::from_pair(pair.t0, pair.t0_plus, tols.rank_tol);
  SampledFamily family;
  family.points.push_back(x0);
  family.operators.push_back(pair.t0);
  family.base_index = 0;
  const double jac_ball = 0.999 * g.ball_radius();
  for (const Vector& x : sample_points) {
    const Matrix jx = f.jacobian(x);
    if (spectral_norm(jx - pair.t0) < jac_ball) {
      family.points.push_back(x);
      family.operators.push_back(jx);
    }
  }
  const LocalFineReport fine = is_locally_fine(family, g);

  Json summary;
  summary["map"] = entry->name;
  summary["x0"] = vector_to_json(x0);
  summary["max_residual"] = max_residual;
  summary["locally_fine"] = fine.locally_fine;
  summary["witness_count"] = fine.witnesses.size();
  summary["valid_radius"] = pair.valid_radius;
  summary["sample_radius"] = radius;
  summary["samples"] = samples;
  summary["family_size"] = family.operators.size();

  bool passed = true;
  if (check) {
    passed = entry->constant_rank ? (max_residual <= 1e-8 && fine.locally_fine)
                                  : !fine.locally_fine;
  }
  return {summary, passed};
}

// ---------------------------------------------------------------------------
// chart

std::pair<Json, bool> run_chart(const ExperimentConfig& cfg, const EffectiveTolerances& tols,
                                Rng& rng, const fs::path&, std::vector<std::string>&,
                                bool check) {
  Matrix x;
  if (cfg.inputs.contains("X")) {
    x = matrix_from_json(cfg.inputs["X"], "inputs.X");
  } else {
    const Index rows = int_or(cfg.inputs, "rows", 4);
    const Index cols = int_or(cfg.inputs, "cols", 4);
    const Index rank = int_or(cfg.inputs, "rank", 2);
    if (rank < 1 || rank > std::min(rows, cols)) {
      throw ParseError("input \"rank\" must be between 1 and min(rows, cols)");
    }
    x = random_rank_matrix(rng, rows, cols, rank);
  }
  const int samples = int_or(cfg.inputs, "samples", 200);

  const OperatorPoint op = OperatorPoint::moore_penrose(x, tols.rank_tol);
  const OperatorSubspace tangent = tangent_space_basis(op, tols.rank_tol);
  const OperatorSubspace complement = complement_space_basis(op, tols.rank_tol);
  const Index m = op.rows(), n = op.cols(), r = op.rank();
  const bool dims_ok = tangent.dim() == r * (m + n - r) &&
                       complement.dim() == (m - r) * (n - r) &&
                       tangent.dim() + complement.dim() == m * n;

  const ManifoldCheckReport rep =
      verify_chart_maps_manifold(op, samples, rng, tols.rank_tol, tols.margin);

  // Tangency of the fixed-rank set: velocities of inverse-chart curves stay
  // in M(X), and every basis element is realized as such a velocity.
  const double ball = op.gen_inv().ball_radius();
  const double h = 1e-4 * ball;
  double tangency_max = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Matrix d = random_tangent_direction(op, tangent, rng);
    const Matrix vel =
        (chart_inverse(op, x + h * d, tols.margin) - chart_inverse(op, x - h * d, tols.margin)) /
        (2.0 * h);
    tangency_max = std::max(tangency_max, operator_subspace_residual(tangent, vel));
  }
  const Index realize_count = std::min<Index>(tangent.dim(), 20);
  for (Index i = 0; i < realize_count; ++i) {
    const Matrix& b = tangent.basis[i];
    const Matrix vel =
        (chart_inverse(op, x + h * b, tols.margin) - chart_inverse(op, x - h * b, tols.margin)) /
        (2.0 * h);
    tangency_max = std::max(tangency_max, (vel - b).norm() / (1.0 + b.norm()));
  }

  // Derivative: identity at X, finite-difference agreement in the ball.
  double deriv_identity_max = 0.0;
  double deriv_fd_max = 0.0;
  for (int i = 0; i < 20; ++i) {
    Matrix dt = rng.gaussian_matrix(m, n);
    dt /= std::max(spectral_norm(dt), 1e-300);
    const Matrix at_x = chart_derivative(op, x, dt, tols.margin);
    deriv_identity_max =
        std::max(deriv_identity_max, spectral_norm(at_x - dt) / (1.0 + spectral_norm(dt)));

    Matrix g = rng.gaussian_matrix(m, n);
    g *= rng.uniform(0.05, 0.5) * ball / std::max(spectral_norm(g), 1e-300);
    const Matrix t = x + g;
    const double hfd = 1e-5 * (1.0 + spectral_norm(t));
    const Matrix analytic = chart_derivative(op, t, dt, tols.margin);
    const Matrix fd = (chart_forward(op, t + hfd * dt, tols.margin) -
                       chart_forward(op, t - hfd * dt, tols.margin)) /
                      (2.0 * hfd);
    deriv_fd_max = std::max(deriv_fd_max,
                            spectral_norm(fd - analytic) / (1.0 + spectral_norm(analytic)));
  }

  Json summary;
  summary["rank"] = r;
  summary["dim_tangent"] = tangent.dim();
  summary["dim_complement"] = complement.dim();
  summary["roundtrip_max_residual"] = rep.roundtrip_max_residual;
  summary["tangency_max_residual"] = tangency_max;
  summary["forward_membership_max_residual"] = rep.forward_membership_max_residual;
  summary["derivative_identity_max_residual"] = deriv_identity_max;
  summary["derivative_fd_max_rel_error"] = deriv_fd_max;
  summary["dims_formula_ok"] = dims_ok;
  summary["samples"] = samples;
  summary["rows"] = m;
  summary["cols"] = n;

  bool passed = true;
  if (check) {
    passed = dims_ok && rep.all_pass && rep.roundtrip_max_residual <= 1e-10 &&
             tangency_max <= 1e-6 && deriv_identity_max <= 1e-12 && deriv_fd_max <= 1e-6;
  }
  return {summary, passed};
}

// ---------------------------------------------------------------------------
// frobenius

std::pair<Json, bool> run_frobenius(const ExperimentConfig& cfg, const EffectiveTolerances&,
                                    Rng&, const fs::path& outdir,
                                    std::vector<std::string>& files, bool check) {
  const std::string name = string_or(cfg.inputs, "family", "");
  const NamedFamily* entry = find_builtin_family(name);
  if (entry == nullptr) {
    throw ParseError("input \"family\" must name a built-in family (see the list subcommand)");
  }
  if (!entry->supports_patch) {
    throw ParseError("family \"" + entry->name +
                     "\" supports membership queries only (use the cofinal experiment)");
  }
  const Vector x0 = cfg.inputs.contains("x0")
                        ? vector_from_json(cfg.inputs["x0"], "inputs.x0")
                        : entry->x0;
  const double radius = number_or(cfg.inputs, "radius", entry->radius);
  const double grid_step = number_or(cfg.inputs, "grid_step", entry->grid_step);
  const double ode_step = number_or(cfg.inputs, "ode_step", entry->ode_step);

  const SplitFrame frame =
      make_split_frame(entry->family, x0, Subspace::from_columns(entry->e_star_columns));
  const IntegralPatch patch =
      integrate_patch(entry->family, frame, radius, grid_step, ode_step);
  const double tangency = verify_tangency(patch, entry->family);

  Json summary;
  summary["family"] = entry->name;
  summary["max_tangency_angle"] = tangency;
  summary["ode_step"] = ode_step;
  summary["grid_step"] = grid_step;
  summary["radius"] = radius;
  summary["grid_points"] = patch.grid.size();

  double residual = 0.0;
  bool has_residual = entry->residual_target.size() > 0;
  if (has_residual) {
    const Vector target = patch.base_coords + entry->residual_target;
    std::vector<Vector> path1, path2;
    if (frame.m0.dim() == 1) {
      path1 = {patch.base_coords, target};
      const Vector mid = 0.5 * (patch.base_coords + target);
      path2 = {patch.base_coords, mid, target};
    } else {
      Vector mid1 = patch.base_coords;
      mid1(0) = target(0);
      Vector mid2 = patch.base_coords;
      mid2(1) = target(1);
      path1 = {patch.base_coords, mid1, target};
      path2 = {patch.base_coords, mid2, target};
    }
    residual = integrability_residual(entry->family, frame, target, path1, path2, ode_step);
    summary["integrability_residual"] = residual;
    summary["residual_target"] = vector_to_json(entry->residual_target);
  }

  double max_error = 0.0;
  if (entry->closed_form) {
    for (std::size_t i = 0; i < patch.grid.size(); ++i) {
      max_error = std::max(max_error,
                           std::abs(patch.psi_values[i](0) - entry->closed_form(patch.grid[i])));
    }
    summary["max_abs_error"] = max_error;
  }

  std::ostringstream csv;
  write_patch_csv(csv, patch);
  write_text_file(outdir / "patch.csv", csv.str(), files);

  bool passed = true;
  if (check) {
    if (entry->integrable) {
      passed = tangency <= 1e-5 && (!entry->closed_form || max_error <= 1e-6);
    } else {
      passed = has_residual && residual >= 0.1;
    }
  }
  return {summary, passed};
}

// ---------------------------------------------------------------------------
// cofinal

std::pair<Json, bool> run_cofinal(const ExperimentConfig& cfg, const EffectiveTolerances&,
                                  Rng&, const fs::path&, std::vector<std::string>&,
                                  bool check) {
  const std::string name = string_or(cfg.inputs, "family", "");
  const NamedFamily* entry = find_builtin_family(name);
  if (entry == nullptr) {
    throw ParseError("input \"family\" must name a built-in family (see the list subcommand)");
  }
  const Vector x0 = cfg.inputs.contains("x0")
                        ? vector_from_json(cfg.inputs["x0"], "inputs.x0")
                        : entry->x0;
  const SplitFrame frame =
      make_split_frame(entry->family, x0, Subspace::from_columns(entry->e_star_columns));

  std::vector<Vector> points{x0};
  if (cfg.inputs.contains("points")) {
    points.clear();
    for (const auto& pj : cfg.inputs["points"]) {
      if (pj.is_array()) {
        points.push_back(vector_from_json(pj, "inputs.points[]"));
      } else if (pj.is_object()) {
        // Matrices are accepted for operator-space families, vectorized
        // column-major.
        const Matrix m = matrix_from_json(pj, "inputs.points[]");
        Vector v(m.size());
        Index pos = 0;
        for (Index c = 0; c < m.cols(); ++c)
          for (Index rr = 0; rr < m.rows(); ++rr) v(pos++) = m(rr, c);
        points.push_back(v);
      } else {
        throw ParseError("inputs.points[] entries must be arrays or matrix objects");
      }
    }
  }

  Json members = Json::array();
  bool base_member = cofinal_membership(entry->family, frame, x0);
  for (const Vector& p : points) {
    const bool member = cofinal_membership(entry->family, frame, p);
    members.push_back({{"point", vector_to_json(p)}, {"member", member}});
  }

  Json summary;
  summary["family"] = entry->name;
  summary["x0"] = vector_to_json(x0);
  summary["base_member"] = base_member;
  summary["members"] = members;
  return {summary, check ? base_member : true};
}

}  // namespace

EffectiveTolerances EffectiveTolerances::from_json(const Json& overrides) {
  EffectiveTolerances tols;
  if (overrides.is_null()) return tols;
  if (!overrides.is_object()) {
    throw ParseError("field \"tolerances\" must be a JSON object");
  }
  for (const auto& [key, value] : overrides.items()) {
    if (!value.is_number() || value.get<double>() <= 0.0) {
      throw ParseError("tolerance override \"" + key + "\" must be a positive number");
    }
    if (key == "rank_tol") {
      tols.rank_tol = value.get<double>();
    } else if (key == "margin") {
      tols.margin = value.get<double>();
    } else {
      throw ParseError("unknown tolerance override \"" + key + "\"");
    }
  }
  return tols;
}

Json EffectiveTolerances::to_json() const {
  return Json{{"rank_tol", rank_tol},
              {"margin", margin},
              {"angle_tol", angle_tol},
              {"direct_sum_tol", direct_sum_tol}};
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"mp-sweep", "conditions", "conjugacy",
                                                 "chart",    "frobenius",  "cofinal"};
  return names;
}

ExperimentConfig parse_config_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  if (!j.contains("experiment")) {
    throw ParseError("missing required field \"experiment\"");
  }
  if (!j["experiment"].is_string()) {
    throw ParseError("field \"experiment\" must be a string");
  }
  ExperimentConfig cfg;
  cfg.experiment = j["experiment"].get<std::string>();
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), cfg.experiment) == names.end()) {
    throw UnknownExperiment("unknown experiment \"" + cfg.experiment + "\"");
  }
  if (j.contains("inputs")) {
    if (!j["inputs"].is_object()) throw ParseError("field \"inputs\" must be a JSON object");
    cfg.inputs = j["inputs"];
  }
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) {
      throw ParseError("field \"tolerances\" must be a JSON object");
    }
    cfg.tolerances = j["tolerances"];
  }
  if (j.contains("output_path")) {
    if (!j["output_path"].is_string()) {
      throw ParseError("field \"output_path\" must be a string");
    }
    cfg.output_path = j["output_path"].get<std::string>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) {
      throw ParseError("field \"seed\" must be an integer");
    }
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  // Validate overrides eagerly so bad configs fail before any work runs.
  (void)EffectiveTolerances::from_json(cfg.tolerances);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open config file " + path);
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return parse_config_text(buffer.str());
}

ExperimentResult run_experiment(const ExperimentConfig& config, bool check) {
  const EffectiveTolerances tols = EffectiveTolerances::from_json(config.tolerances);
  Rng rng(config.seed);
  const fs::path outdir(config.output_path);
  fs::create_directories(outdir);

  ExperimentResult result;
  std::pair<Json, bool> outcome;
  if (config.experiment == "mp-sweep") {
    outcome = run_mp_sweep(config, tols, rng, outdir, result.files_written, check);
  } else if (config.experiment == "conditions") {
    outcome = run_conditions(config, tols, rng, outdir, result.files_written, check);
  } else if (config.experiment == "conjugacy") {
    outcome = run_conjugacy(config, tols, rng, outdir, result.files_written, check);
  } else if (config.experiment == "chart") {
    outcome = run_chart(config, tols, rng, outdir, result.files_written, check);
  } else if (config.experiment == "frobenius") {
    outcome = run_frobenius(config, tols, rng, outdir, result.files_written, check);
  } else if (config.experiment == "cofinal") {
    outcome = run_cofinal(config, tols, rng, outdir, result.files_written, check);
  } else {
    throw UnknownExperiment("unknown experiment \"" + config.experiment + "\"");
  }

  result.summary = std::move(outcome.first);
  result.check_passed = outcome.second;
  result.summary["experiment"] = config.experiment;
  result.summary["seed"] = config.seed;
  result.summary["version"] = kVersion;
  result.summary["tolerances"] = tols.to_json();
  if (check) result.summary["check_passed"] = result.check_passed;

  write_text_file(outdir / "report.json", result.summary.dump(2) + "\n",
                  result.files_written);
  return result;
}

}  // namespace geninv
