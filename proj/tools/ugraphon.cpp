#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ugraphon/config.hpp"
#include "ugraphon/error.hpp"
#include "ugraphon/experiments.hpp"
#include "ugraphon/fixtures.hpp"

namespace fs = std::filesystem;
using namespace ugraphon;

namespace {

struct RunFlags {
  std::string config;
  std::string fixture;
  std::string out;
  std::vector<std::int64_t> seeds;
  std::vector<std::int64_t> ks;
};

int run(const std::string& kind, const RunFlags& flags) {
  json raw;
  fs::path base_dir;
  if (!flags.config.empty()) {
    if (!fs::exists(flags.config)) throw ConfigError("config file not found: " + flags.config);
    std::ifstream in(flags.config);
    try {
      raw = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(flags.config + ": " + e.what());
    }
    base_dir = fs::path(flags.config).parent_path();
    if (raw.value("experiment", kind) != kind) {
      throw ConfigError("config describes a '" + raw["experiment"].get<std::string>() + "' experiment, not '" +
                        kind + "'");
    }
    raw["experiment"] = kind;
    if (!flags.fixture.empty()) raw["tree"] = {{"fixture", flags.fixture}};
  } else {
    raw = default_experiment(kind, flags.fixture);
  }
  if (!flags.seeds.empty()) raw["seeds"] = flags.seeds;
  if (!flags.ks.empty()) raw["k"] = flags.ks;

  ExperimentConfig cfg = load_experiment(raw, base_dir);
  if (!flags.out.empty()) cfg.out = flags.out;
  const ExperimentOutput output = run_experiment(cfg);
  write_outputs(output, cfg, cfg.out);
  for (const auto& note : output.notes) std::cout << note << '\n';
  std::cout << "wrote " << output.files.size() + 1 << " files to " << cfg.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ultrametric graphon experiments: spectra, projectors, detection, thresholds, walks, SIS"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  RunFlags flags;
  std::string chosen;
  for (const auto& kind : experiment_kinds()) {
    auto* sub = app.add_subcommand(kind, "run the " + kind + " experiment");
    sub->add_option("--config", flags.config, "experiment config or manifest (JSON)");
    sub->add_option("--fixture", flags.fixture, "built-in fixture used as the graphon");
    sub->add_option("--out", flags.out, "output directory (overrides the config)");
    sub->add_option("--seeds", flags.seeds, "RNG seeds")->delimiter(',');
    sub->add_option("--k", flags.ks, "grid multipliers")->delimiter(',');
    sub->callback([&chosen, kind] { chosen = kind; });
  }

  int depth = 7;
  double concentration = 1.6;
  std::int64_t tree_seed = 1;
  std::int64_t denominator = 10000;
  std::string tree_out;
  auto* gen = app.add_subcommand("gen-tree", "generate a random binary tree config");
  gen->add_option("--L", depth, "split levels")->capture_default_str();
  gen->add_option("--c", concentration, "Beta(c, c) concentration")->capture_default_str();
  gen->add_option("--seed", tree_seed, "RNG seed")->capture_default_str();
  gen->add_option("--denominator", denominator, "common grid for split points")->capture_default_str();
  gen->add_option("--out", tree_out, "output file (stdout when omitted)");

  std::string fixture_name;
  auto* fix = app.add_subcommand("fixtures", "list built-in fixtures or print one");
  fix->add_option("name", fixture_name, "fixture to print as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (!chosen.empty()) return run(chosen, flags);
    if (gen->parsed()) {
      if (tree_seed < 0) throw ConfigError("--seed must be >= 0");
      const UltrametricTree tree =
          random_binary_tree(depth, concentration, static_cast<std::uint64_t>(tree_seed), denominator);
      const std::string text = json{{"tree", node_spec_to_json(tree.to_spec())}}.dump(2) + "\n";
      if (tree_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream(tree_out) << text;
      }
      return 0;
    }
    if (fix->parsed()) {
      if (fixture_name.empty()) {
        for (const auto& name : fixture_names()) std::cout << name << ": " << fixture_description(name) << '\n';
      } else {
        std::cout << fixture_config(fixture_name).dump(2) << '\n';
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
