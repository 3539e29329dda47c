// Command-line front end: one subcommand per registered experiment plus a
// `list` subcommand enumerating runners, built-in families and maps.
//
// Exit status: 0 on success, 2 on any module or configuration error, 3 when
// --check was requested and an acceptance threshold failed.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "geninv/errors.hpp"
#include "geninv/frobenius.hpp"
#include "geninv/harness.hpp"
#include "geninv/local_conjugacy.hpp"
#include "geninv/version.hpp"

namespace {

struct SubcommandState {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool check = false;
};

int run_list() {
  std::cout << geninv::kLibraryName << " " << geninv::kVersion << "\n\nexperiments:\n";
  for (const auto& name : geninv::experiment_names()) {
    std::cout << "  " << name << "\n";
  }
  std::cout << "\nbuilt-in families (frobenius, cofinal):\n";
  for (const auto& family : geninv::builtin_families()) {
    std::cout << "  " << family.name << (family.integrable ? "" : "  (non-integrable)")
              << (family.supports_patch ? "" : "  (cofinal only)") << "\n";
  }
  std::cout << "\nbuilt-in maps (conjugacy):\n";
  for (const auto& map : geninv::builtin_maps()) {
    std::cout << "  " << map.name << (map.constant_rank ? "" : "  (rank jumps)") << "\n";
  }
  return 0;
}

int run_one(const std::string& name, const SubcommandState& state) {
  geninv::ExperimentConfig cfg = geninv::parse_config_file(state.config_path);
  if (cfg.experiment != name) {
    throw geninv::ParseError("config names experiment \"" + cfg.experiment +
                             "\" but the subcommand is \"" + name + "\"");
  }
  if (state.seed_given) cfg.seed = state.seed;
  if (!state.out_dir.empty()) cfg.output_path = state.out_dir;

  const geninv::ExperimentResult result = geninv::run_experiment(cfg, state.check);
  std::cout << result.summary.dump(2) << std::endl;
  if (state.check && !result.check_passed) {
    std::cerr << "check failed for experiment " << name << std::endl;
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(geninv::kLibraryName) +
               ": generalized-inverse perturbation experiments"};
  app.require_subcommand(1);

  SubcommandState state;
  std::string selected;

  for (const auto& name : geninv::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", state.config_path, "JSON experiment config")->required();
    sub->add_option("--out", state.out_dir, "output directory (overrides config)");
    sub->add_option("--seed", state.seed, "seed override")->each([&](const std::string&) {
      state.seed_given = true;
    });
    sub->add_flag("--check", state.check, "evaluate acceptance thresholds");
    sub->callback([&selected, name]() { selected = name; });
  }
  CLI::App* list_cmd = app.add_subcommand("list", "list experiments and built-ins");
  list_cmd->callback([&selected]() { selected = "list"; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (selected == "list") return run_list();
    return run_one(selected, state);
  } catch (const geninv::Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
}
