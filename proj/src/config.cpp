#include "ugraphon/config.hpp"

#include <fstream>
#include <set>

#include "ugraphon/error.hpp"
#include "ugraphon/fixtures.hpp"

namespace ugraphon {

namespace {

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const long long v = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return Rational(v);
    }
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    const long long p = std::stoll(num, &used);
    if (used != num.size()) throw std::invalid_argument(text);
    const long long q = std::stoll(den, &used);
    if (used != den.size() || q <= 0) throw std::invalid_argument(text);
    return Rational(p, q);
  } catch (const std::exception&) {
    throw ConfigError("bad rational '" + text + "'");
  }
}

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

NodeSpec parse_node(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": node must be an object");
  if (!j.contains("interval") || !j["interval"].is_string()) {
    throw ConfigError(path + ": missing interval string");
  }
  if (!j.contains("height") || !j["height"].is_number()) throw ConfigError(path + ": missing numeric height");
  NodeSpec spec;
  try {
    std::tie(spec.lo, spec.hi) = parse_interval(j["interval"].get<std::string>());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
  spec.height = j["height"].get<double>();
  if (j.contains("label")) {
    if (!j["label"].is_string()) throw ConfigError(path + ": label must be a string");
    spec.label = j["label"].get<std::string>();
  }
  if (j.contains("children")) {
    if (!j["children"].is_array()) throw ConfigError(path + ": children must be an array");
    for (std::size_t i = 0; i < j["children"].size(); ++i) {
      spec.children.push_back(parse_node(j["children"][i], path + "/" + std::to_string(i)));
    }
  }
  return spec;
}

double number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number()) throw ConfigError(where + ": missing numeric '" + key + "'");
  return j[key].get<double>();
}

std::int64_t integer(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw ConfigError(where + ": missing integer '" + key + "'");
  }
  return j[key].get<std::int64_t>();
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

// Follows fixture references down to a graphon block with a concrete tree source.
json resolve_graphon_block(const json& j) {
  if (!j.is_object() || !j.contains("tree")) throw ConfigError("graphon block needs a 'tree'");
  const json& tree = j["tree"];
  if (!tree.is_object() || !tree.contains("fixture")) return j;
  json merged = fixture_config(tree["fixture"].get<std::string>());
  if (j.contains("kernel")) merged["kernel"] = j["kernel"];
  if (j.contains("one_level")) merged["one_level"] = j["one_level"];
  return resolve_graphon_block(merged);
}

std::vector<std::int64_t> int_list(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing '") + key + "'");
  const json& v = j[key];
  std::vector<std::int64_t> out;
  if (v.is_number_integer()) {
    out.push_back(v.get<std::int64_t>());
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_number_integer()) throw ConfigError(std::string("'") + key + "' entries must be integers");
      out.push_back(x.get<std::int64_t>());
    }
  } else {
    throw ConfigError(std::string("'") + key + "' must be an integer or a list of integers");
  }
  if (out.empty()) throw ConfigError(std::string("'") + key + "' must be nonempty");
  return out;
}

}  // namespace

std::pair<Rational, Rational> parse_interval(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw ConfigError("interval '" + text + "' must look like p/q..r/s");
  const Rational lo = parse_rational(text.substr(0, dots));
  const Rational hi = parse_rational(text.substr(dots + 2));
  if (!(lo < hi)) throw ConfigError("interval '" + text + "' is empty");
  return {lo, hi};
}

std::string format_interval(const Rational& lo, const Rational& hi) {
  return format_rational(lo) + ".." + format_rational(hi);
}

NodeSpec node_spec_from_json(const json& j) { return parse_node(j, "root"); }

json node_spec_to_json(const NodeSpec& spec) {
  json j;
  j["interval"] = format_interval(spec.lo, spec.hi);
  j["height"] = spec.height;
  if (!spec.label.empty()) j["label"] = spec.label;
  if (!spec.children.empty()) {
    j["children"] = json::array();
    for (const auto& c : spec.children) j["children"].push_back(node_spec_to_json(c));
  }
  return j;
}

Kernel kernel_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw ConfigError("kernel: missing 'type'");
  }
  const std::string type = j["type"].get<std::string>();
  if (type == "exp") return Kernel::exponential(number(j, "sigma", "kernel"));
  if (type == "table") {
    if (!j.contains("levels") || !j["levels"].is_object()) throw ConfigError("kernel: table needs 'levels'");
    std::map<int, double> levels;
    for (const auto& [key, value] : j["levels"].items()) {
      if (!value.is_number()) throw ConfigError("kernel: level " + key + " must be numeric");
      try {
        levels[std::stoi(key)] = value.get<double>();
      } catch (const std::logic_error&) {
        throw ConfigError("kernel: level key '" + key + "' is not an integer");
      }
    }
    return Kernel::level_table(std::move(levels));
  }
  if (type == "powerlaw") {
    return Kernel::power_law(number(j, "wmin", "kernel"), number(j, "wmax", "kernel"),
                             number(j, "gamma", "kernel"), static_cast<int>(integer(j, "L", "kernel")));
  }
  throw ConfigError("kernel: unknown type '" + type + "'");
}

json kernel_to_json(const Kernel& kernel) {
  struct Visitor {
    json operator()(const Kernel::Exponential& k) const { return {{"type", "exp"}, {"sigma", k.sigma}}; }
    json operator()(const Kernel::LevelTable& k) const {
      json levels = json::object();
      for (const auto& [l, p] : k.levels) levels[std::to_string(l)] = p;
      return {{"type", "table"}, {"levels", levels}};
    }
    json operator()(const Kernel::PowerLawLevels& k) const {
      return {{"type", "powerlaw"}, {"wmin", k.w_min}, {"wmax", k.w_max}, {"gamma", k.gamma}, {"L", k.depth}};
    }
  };
  return std::visit(Visitor{}, kernel.variant());
}

UltrametricTree tree_from_source(const json& source, const std::filesystem::path& base_dir) {
  if (!source.is_object()) throw ConfigError("tree: source must be an object");
  if (source.contains("interval")) return UltrametricTree(node_spec_from_json(source));
  if (source.contains("inline")) return UltrametricTree(node_spec_from_json(source["inline"]));
  if (source.contains("fixture")) {
    const json block = resolve_graphon_block({{"tree", source}});
    return tree_from_source(block["tree"], base_dir);
  }
  if (source.contains("file")) {
    if (!source["file"].is_string()) throw ConfigError("tree: 'file' must be a path string");
    std::filesystem::path path = source["file"].get<std::string>();
    if (path.is_relative()) path = base_dir / path;
    if (!std::filesystem::exists(path)) throw ConfigError("tree: file not found: " + path.string());
    const json content = read_json_file(path);
    const json& node = content.contains("tree") ? content["tree"] : content;
    return tree_from_source(node, path.parent_path());
  }
  if (source.contains("random")) {
    const json& r = source["random"];
    const auto depth = integer(r, "L", "tree.random");
    const double c = number(r, "c", "tree.random");
    const auto seed = integer(r, "seed", "tree.random");
    const auto denominator = r.contains("denominator") ? integer(r, "denominator", "tree.random") : 10000;
    if (seed < 0) throw ConfigError("tree.random: seed must be >= 0");
    return random_binary_tree(static_cast<int>(depth), c, static_cast<std::uint64_t>(seed), denominator);
  }
  throw ConfigError("tree: expected one of fixture, file, inline, random or a node record");
}

Graphon graphon_from_json(const json& j, const std::filesystem::path& base_dir) {
  const json block = resolve_graphon_block(j);
  if (!block.contains("kernel")) throw ConfigError("graphon block needs a 'kernel'");
  auto tree = std::make_shared<const UltrametricTree>(tree_from_source(block["tree"], base_dir));
  Kernel kernel = kernel_from_json(block["kernel"]);
  if (!block.contains("one_level")) return Graphon(std::move(tree), std::move(kernel));
  const json& ol = block["one_level"];
  const double inter = number(ol, "inter_prob", "one_level");
  std::vector<IntraKernelSpec> intra;
  if (ol.contains("intra")) {
    if (!ol["intra"].is_array()) throw ConfigError("one_level: 'intra' must be a list");
    for (const auto& item : ol["intra"]) {
      const std::string type = item.value("type", "");
      if (type == "ultrametric") {
        intra.push_back({IntraKernelSpec::Type::Ultrametric, 0.0});
      } else if (type == "const") {
        intra.push_back({IntraKernelSpec::Type::Constant, number(item, "q", "one_level.intra")});
      } else {
        throw ConfigError("one_level: unknown intra type '" + type + "'");
      }
    }
  } else {
    intra.push_back({IntraKernelSpec::Type::Ultrametric, 0.0});
  }
  return Graphon::one_level(std::move(tree), std::move(kernel), std::move(intra), inter);
}

json graphon_to_json(const Graphon& g) {
  json j;
  j["tree"] = {{"inline", node_spec_to_json(g.tree().to_spec())}};
  j["kernel"] = kernel_to_json(g.kernel());
  if (g.is_one_level()) {
    json intra = json::array();
    for (const auto& s : g.intra_specs()) {
      if (s.type == IntraKernelSpec::Type::Constant) {
        intra.push_back({{"type", "const"}, {"q", s.q}});
      } else {
        intra.push_back({{"type", "ultrametric"}});
      }
    }
    j["one_level"] = {{"inter_prob", g.inter_prob()}, {"intra", intra}};
  }
  return j;
}

ExperimentConfig load_experiment(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  if (!j.contains("experiment") || !j["experiment"].is_string()) throw ConfigError("missing 'experiment'");
  cfg.experiment = j["experiment"].get<std::string>();
  const auto& kinds = experiment_kinds();
  if (std::find(kinds.begin(), kinds.end(), cfg.experiment) == kinds.end()) {
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw ConfigError("'params' must be an object");
    cfg.params = j["params"];
  }
  if (j.contains("out")) {
    if (!j["out"].is_string()) throw ConfigError("'out' must be a string");
    cfg.out = j["out"].get<std::string>();
  }

  json block = j;
  block.erase("experiment");
  const json resolved = resolve_graphon_block(block);
  if (resolved["tree"].contains("random")) cfg.concentration = number(resolved["tree"]["random"], "c", "tree.random");
  if (cfg.params.contains("c")) cfg.concentration = number(cfg.params, "c", "params");
  cfg.params["c"] = cfg.concentration;
  cfg.graphon = graphon_to_json(graphon_from_json(resolved, base_dir));

  cfg.k_min = cfg.params.contains("k_min") ? static_cast<int>(integer(cfg.params, "k_min", "params")) : 2;
  if (cfg.k_min < 1) throw ConfigError("params.k_min must be >= 1");
  for (auto k : int_list(j, "k")) {
    if (k < cfg.k_min) {
      throw ConfigError("k = " + std::to_string(k) + " is below k_min = " + std::to_string(cfg.k_min));
    }
    cfg.ks.push_back(static_cast<int>(k));
  }
  for (auto s : int_list(j, "seeds")) {
    if (s < 0) throw ConfigError("seeds must be >= 0");
    cfg.seeds.push_back(static_cast<std::uint64_t>(s));
  }
  return cfg;
}

ExperimentConfig load_experiment_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
  return load_experiment(read_json_file(path), path.parent_path());
}

json to_manifest(const ExperimentConfig& cfg) {
  json j = cfg.graphon;
  j["experiment"] = cfg.experiment;
  j["version"] = kVersion;
  j["k"] = cfg.ks;
  j["seeds"] = cfg.seeds;
  j["params"] = cfg.params;
  j["out"] = cfg.out;
  return j;
}

}  // namespace ugraphon
