#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "ugraphon/graphon.hpp"

namespace ugraphon {

using json = nlohmann::json;

inline constexpr const char* kVersion = "ugraphon 1.0.0";

/// "p/q..r/s" with integers allowed for either endpoint.
std::pair<Rational, Rational> parse_interval(const std::string& text);
std::string format_interval(const Rational& lo, const Rational& hi);

NodeSpec node_spec_from_json(const json& j);
json node_spec_to_json(const NodeSpec& spec);

Kernel kernel_from_json(const json& j);
json kernel_to_json(const Kernel& kernel);

/// Tree source: {"fixture": name} | {"file": path} | {"inline": node} |
/// {"random": {"L", "c", "seed", "denominator"}} | a bare node record.
/// Relative file paths resolve against `base_dir`.
UltrametricTree tree_from_source(const json& source, const std::filesystem::path& base_dir = {});

/// Graphon block {"tree": source, "kernel": ..., "one_level"?: {...}}.
Graphon graphon_from_json(const json& j, const std::filesystem::path& base_dir = {});
/// Fully resolved form with the tree inlined.
json graphon_to_json(const Graphon& g);

struct ExperimentConfig {
  std::string experiment;
  json graphon;  // resolved: tree inlined
  std::vector<int> ks;
  std::vector<std::uint64_t> seeds;
  json params = json::object();
  std::string out = "out";
  int k_min = 2;
  double concentration = 0.0;  // Beta(c, c) parameter when the tree was generated
};

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"spectrum", "projectors", "detect", "threshold", "commute", "sis"};
  return kinds;
}

/// Validates and resolves a config; ConfigError names the offending field.
ExperimentConfig load_experiment(const json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_file(const std::filesystem::path& path);

/// Manifest: the resolved config plus the tool version. Loading it with
/// load_experiment reproduces the run.
json to_manifest(const ExperimentConfig& cfg);

}  // namespace ugraphon
