#include "ugraphon/fixtures.hpp"

#include "ugraphon/error.hpp"

namespace ugraphon {

namespace {

NodeSpec node(Rational lo, Rational hi, double height, std::string label, std::vector<NodeSpec> children = {}) {
  return NodeSpec{lo, hi, height, std::move(label), std::move(children)};
}

NodeSpec abc_tree() {
  // root -> {A, B, C}; A -> {A1, A2}; B -> {B1, B2}; C -> {C1, C2, C3};
  // every level-3 node splits into halves a/b, giving 14 cells of length 1/14.
  const std::vector<std::pair<std::string, int>> groups{{"A", 2}, {"B", 2}, {"C", 3}};
  std::vector<NodeSpec> level2;
  int cursor = 0;
  for (const auto& [name, parts] : groups) {
    std::vector<NodeSpec> level3;
    const int start = cursor;
    for (int p = 1; p <= parts; ++p) {
      const std::string label = name + std::to_string(p);
      level3.push_back(node(Rational(cursor, 14), Rational(cursor + 2, 14), 0.05, label,
                            {node(Rational(cursor, 14), Rational(cursor + 1, 14), 0.01, label + "a"),
                             node(Rational(cursor + 1, 14), Rational(cursor + 2, 14), 0.01, label + "b")}));
      cursor += 2;
    }
    level2.push_back(node(Rational(start, 14), Rational(cursor, 14), 0.2, name, std::move(level3)));
  }
  return node(0, 1, 0.5, "root", std::move(level2));
}

std::map<std::string, json> make_fixtures() {
  std::map<std::string, json> out;
  out["two-block"] = {
      {"description", "root -> [0,1/2), [1/2,1]; level table {1: 0.1, 2: 0.8}"},
      {"tree", node_spec_to_json(node(0, 1, 1.0, "root",
                                      {node(0, Rational(1, 2), 0.5, "left"), node(Rational(1, 2), 1, 0.5, "right")}))},
      {"kernel", {{"type", "table"}, {"levels", {{"1", 0.1}, {"2", 0.8}}}}}};
  out["three-level"] = {
      {"description", "uneven three-level binary tree; level table {1: 0.05, 2: 0.3, 3: 0.7}"},
      {"tree", node_spec_to_json(node(
                   0, 1, 1.0, "root",
                   {node(0, Rational(1, 2), 0.5, "L",
                         {node(0, Rational(1, 3), 0.25, "L0"), node(Rational(1, 3), Rational(1, 2), 0.25, "L1")}),
                    node(Rational(1, 2), 1, 0.5, "R",
                         {node(Rational(1, 2), Rational(3, 4), 0.25, "R0"), node(Rational(3, 4), 1, 0.25, "R1")})}))},
      {"kernel", {{"type", "table"}, {"levels", {{"1", 0.05}, {"2", 0.3}, {"3", 0.7}}}}}};
  out["example-abc"] = {
      {"description", "A/B/C tree with 14 cells of length 1/14, kernel exp(-d/0.1)"},
      {"tree", node_spec_to_json(abc_tree())},
      {"kernel", {{"type", "exp"}, {"sigma", 0.1}}}};
  out["fig9-threshold"] = {
      {"description", "one-level graphon over the A/B/C tree (mu = 4/14, 4/14, 6/14), ultrametric intra kernels"},
      {"tree", node_spec_to_json(abc_tree())},
      {"kernel", {{"type", "exp"}, {"sigma", 0.1}}},
      {"one_level", {{"inter_prob", 0.08}, {"intra", json::array({{{"type", "ultrametric"}}})}}}};
  const json powerlaw = {{"type", "powerlaw"}, {"wmin", 0.03}, {"wmax", 0.67}, {"gamma", 1.8}, {"L", 7}};
  out["sis-homogeneous"] = {
      {"description", "random binary tree, L = 7, Beta(100, 100) splits on a 1/260 grid, power-law levels"},
      {"tree", {{"random", {{"L", 7}, {"c", 100.0}, {"seed", 2024}, {"denominator", 260}}}}},
      {"kernel", powerlaw}};
  out["sis-heterogeneous"] = {
      {"description", "random binary tree, L = 7, Beta(1.6, 1.6) splits on a 1/260 grid, power-law levels"},
      {"tree", {{"random", {{"L", 7}, {"c", 1.6}, {"seed", 2024}, {"denominator", 260}}}}},
      {"kernel", powerlaw}};
  return out;
}

}  // namespace

const std::map<std::string, json>& builtin_fixtures() {
  static const std::map<std::string, json> fixtures = make_fixtures();
  return fixtures;
}

std::vector<std::string> fixture_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : builtin_fixtures()) names.push_back(name);
  return names;
}

const json& fixture_config(const std::string& name) {
  const auto& all = builtin_fixtures();
  auto it = all.find(name);
  if (it == all.end()) throw ConfigError("unknown fixture '" + name + "'");
  return it->second;
}

std::string fixture_description(const std::string& name) {
  return fixture_config(name)["description"].get<std::string>();
}

Graphon make_fixture(const std::string& name) { return graphon_from_json(fixture_config(name)); }

json default_experiment(const std::string& kind, const std::string& fixture) {
  json cfg;
  cfg["experiment"] = kind;
  cfg["seeds"] = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  cfg["params"] = json::object();
  std::string name = fixture;
  if (kind == "spectrum") {
    if (name.empty()) name = "example-abc";
    cfg["k"] = {2, 10, 100};
  } else if (kind == "projectors" || kind == "detect") {
    if (name.empty()) name = "example-abc";
    cfg["k"] = {10, 100};
  } else if (kind == "threshold") {
    if (name.empty()) name = "fig9-threshold";
    cfg["k"] = {10};
    cfg["seeds"] = {0};
  } else if (kind == "commute") {
    if (name.empty()) name = "two-block";
    cfg["k"] = {20, 200, 700};
  } else if (kind == "sis") {
    if (name.empty()) name = "sis-heterogeneous";
    cfg["k"] = {1};
    cfg["seeds"] = {1, 2, 3};
    cfg["params"]["k_min"] = 1;
  } else {
    throw ConfigError("unknown experiment '" + kind + "'");
  }
  cfg["tree"] = {{"fixture", name}};
  cfg["out"] = "out/" + kind;
  return cfg;
}

}  // namespace ugraphon
