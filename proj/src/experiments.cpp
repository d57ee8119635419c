#include "ugraphon/experiments.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ugraphon/error.hpp"
#include "ugraphon/format.hpp"
#include "ugraphon/linalg.hpp"
#include "ugraphon/parallel.hpp"
#include "ugraphon/randomwalk.hpp"
#include "ugraphon/sis.hpp"
#include "ugraphon/spectral.hpp"

namespace ugraphon {

namespace {

class Csv {
 public:
  explicit Csv(const std::string& header) { out_ << header << '\n'; }

  template <typename... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  static std::string cell(double v) { return fmt_double(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  template <typename T>
  static std::string cell(T v) requires std::is_integral_v<T> {
    return std::to_string(v);
  }

  std::ostringstream out_;
};

template <typename T>
T param(const ExperimentConfig& cfg, const char* key, T fallback) {
  if (!cfg.params.contains(key)) return fallback;
  try {
    return cfg.params[key].get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("params.") + key + " has the wrong type");
  }
}

std::vector<NodeId> selected_nodes(const ExperimentConfig& cfg, const UltrametricTree& tree) {
  std::vector<NodeId> nodes;
  if (cfg.params.contains("nodes")) {
    for (const auto& label : param<std::vector<std::string>>(cfg, "nodes", {})) {
      const auto id = tree.find(label);
      if (!id) throw ConfigError("params.nodes: unknown node '" + label + "'");
      if (tree.node(*id).is_finest()) throw ConfigError("params.nodes: '" + label + "' is a finest node");
      nodes.push_back(*id);
    }
    return nodes;
  }
  for (const TreeNode& n : tree.nodes()) {
    if (!n.is_finest()) nodes.push_back(n.id);
  }
  return nodes;
}

ExperimentOutput run_spectrum(const ExperimentConfig& cfg, const Graphon& g) {
  const bool clique = param(cfg, "clique_atoms", false);
  const PairingReport report = pairing_experiment(g, cfg.ks, cfg.seeds, clique);
  Csv spectra("k,N_k,seed,index,lambda_det_over_Nk,lambda_rand_over_Nk,abs_error");
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.det_over_n.size(); ++i) {
      spectra.row(row.k, row.n, row.seed, i + 1, row.det_over_n[i], row.rand_over_n[i],
                  std::abs(row.det_over_n[i] - row.rand_over_n[i]));
    }
  }
  Csv summary("k,N_k,median_max_error,fitted_C");
  ExperimentOutput out;
  for (const auto& s : report.per_k) {
    summary.row(s.k, s.n, s.median_max_error, report.fitted_c);
    out.notes.push_back("N_k = " + std::to_string(s.n) + ": median max pairing error " + fmt_double(s.median_max_error));
  }
  out.notes.push_back("fitted C in error ~ C N_k^{-1/2}: " + fmt_double(report.fitted_c));
  out.files.push_back({"spectra.csv", spectra.str()});
  out.files.push_back({"spectra_summary.csv", summary.str()});
  return out;
}

// Shared loop of the projector and detection experiments: one eigensolve per (k, seed).
template <typename Body>
void per_sample(const ExperimentConfig& cfg, const Graphon& g, Body body) {
  for (int k : cfg.ks) {
    const SampleGrid grid = build_grid(g.tree(), k);
    const ClosedFormSpectrum spectrum = closed_form_spectrum(g, grid);
    for (std::uint64_t seed : cfg.seeds) {
      const EigenDecomposition eig = empirical_spectrum(sample_random(g, grid, seed).laplacian);
      body(k, seed, grid, spectrum, eig);
    }
  }
}

ExperimentOutput run_projectors(const ExperimentConfig& cfg, const Graphon& g) {
  const auto nodes = selected_nodes(cfg, g.tree());
  const double gamma = param(cfg, "gamma", 0.25);
  Csv csv("k,seed,node,frobenius_error,delta,bound");
  std::size_t discrepancies = 0;
  std::size_t total = 0;
  std::size_t within = 0;
  per_sample(cfg, g, [&](int k, std::uint64_t seed, const SampleGrid& grid, const ClosedFormSpectrum& spectrum,
                         const EigenDecomposition& eig) {
    for (NodeId id : nodes) {
      const ProjectorResult r = projector_from_decomposition(g.tree(), grid, spectrum, eig, id, gamma);
      csv.row(k, seed, g.tree().node(id).label, r.frobenius_error, r.delta, r.bound);
      discrepancies += r.nearest_differs ? 1 : 0;
      within += r.frobenius_error <= r.bound ? 1 : 0;
      ++total;
    }
  });
  ExperimentOutput out;
  out.files.push_back({"projectors.csv", csv.str()});
  out.notes.push_back(std::to_string(within) + "/" + std::to_string(total) + " projector errors within the gap bound");
  out.notes.push_back(std::to_string(discrepancies) + " blocks where nearest-value selection differs from index selection");
  return out;
}

ExperimentOutput run_detect(const ExperimentConfig& cfg, const Graphon& g) {
  const auto nodes = selected_nodes(cfg, g.tree());
  const double zero_tol = param(cfg, "zero_tol", 0.0);
  Csv csv("k,seed,node,n_components,misassigned,flag");
  std::size_t exact = 0;
  std::size_t total = 0;
  per_sample(cfg, g, [&](int k, std::uint64_t seed, const SampleGrid& grid, const ClosedFormSpectrum& spectrum,
                         const EigenDecomposition& eig) {
    for (NodeId id : nodes) {
      const SpectralBlock block = spectral_block(spectrum, id);
      DetectionResult r =
          detect_from_projector(empirical_projector(eig, block.begin, block.count), g.tree(), grid, id, zero_tol);
      std::string flag = r.ambiguous ? "ambiguous" : (r.misassigned ? "misassigned" : "ok");
      if (block.merged()) flag += "+merged";
      csv.row(k, seed, g.tree().node(id).label, r.n_components, r.misassigned, flag);
      exact += r.exact() ? 1 : 0;
      ++total;
    }
  });
  ExperimentOutput out;
  out.files.push_back({"detection.csv", csv.str()});
  out.notes.push_back(std::to_string(exact) + "/" + std::to_string(total) + " exact recoveries");
  return out;
}

std::vector<double> default_inter_probs() {
  std::vector<double> w;
  for (int i = 0; i < 15; ++i) w.push_back((1 + 2 * i) / 100.0);
  return w;
}

ExperimentOutput run_threshold(const ExperimentConfig& cfg, const Graphon& g) {
  if (!g.is_one_level()) throw ConfigError("threshold experiment needs a one_level graphon block");
  const auto probs = param(cfg, "inter_probs", default_inter_probs());
  Csv csv("w_inter,p_star,regime,fiedler_support");
  int flips = 0;
  std::optional<Regime> last;
  for (double w : probs) {
    const Graphon gw = Graphon::one_level(g.tree_ptr(), g.kernel(), g.intra_specs(), w);
    const ThresholdReport r = detectability_threshold(gw, cfg.ks.front());
    std::string support = to_string(r.fiedler_support);
    if (r.support_child) support += ":" + g.tree().node(g.tree().root().children[*r.support_child]).label;
    csv.row(w, r.p_star, std::string(to_string(r.regime)), support);
    if (last && *last != r.regime) ++flips;
    last = r.regime;
  }
  ExperimentOutput out;
  out.files.push_back({"threshold.csv", csv.str()});
  out.notes.push_back("regime flips along the sweep: " + std::to_string(flips));
  return out;
}

ExperimentOutput run_commute(const ExperimentConfig& cfg, const Graphon& g) {
  const auto pairs = param<std::size_t>(cfg, "pairs", 200);
  const bool deterministic = param(cfg, "deterministic", false);
  const CollapseReport report = collapse_experiment(g, cfg.ks, cfg.seeds, pairs, deterministic);
  const auto& tree = g.tree();
  Csv csv("k,N_k,seed,i,j,finest_i,finest_j,C_over_Nk,limit_value,abs_error");
  for (const auto& r : report.rows) {
    csv.row(r.k, r.n, r.seed, r.i, r.j, tree.node(r.finest_i).label, tree.node(r.finest_j).label, r.c_over_n,
            r.limit, r.abs_error());
  }
  Csv summary(
      "k,N_k,median_abs_error,median_relative_error,median_degree_limit_error,median_parent_limit_error,"
      "max_abs_error,skipped_seeds");
  ExperimentOutput out;
  for (const auto& s : report.per_k) {
    summary.row(s.k, s.n, s.median_error, s.median_relative, s.median_degree_error, s.median_parent_error,
                s.max_error, s.skipped_seeds);
    out.notes.push_back("N_k = " + std::to_string(s.n) + ": median commute error " + fmt_double(s.median_error));
  }
  out.files.push_back({"commute.csv", csv.str()});
  out.files.push_back({"commute_summary.csv", summary.str()});
  return out;
}

std::vector<double> default_budgets() {
  std::vector<double> b;
  for (int i = 0; i <= 20; ++i) b.push_back(0.95 * i / 20.0);
  return b;
}

std::vector<double> default_taus() {
  std::vector<double> t;
  for (int i = 4; i <= 20; ++i) t.push_back(i);
  return t;
}

ExperimentOutput run_sis(const ExperimentConfig& cfg, const Graphon& g) {
  if (g.is_one_level()) throw ConfigError("SIS sweep needs an ultrametric graphon");
  json strategies = cfg.params.value("strategies", json::array({{{"strategy", "global"}, {"levels", {2}}},
                                                                {{"strategy", "targeted"}, {"levels", {2}}}}));
  SweepSpec base;
  base.taus = param(cfg, "taus", default_taus());
  base.budgets = param(cfg, "budgets", default_budgets());
  base.epsilon = param(cfg, "epsilon", 1e-3);
  base.k = cfg.ks.front();
  base.seeds = cfg.seeds;
  base.concentration = cfg.concentration;
  const double extinction = param(cfg, "extinction_tol", 1e-4);

  Csv csv("strategy,level_set,c,seed,tau,B,rho_inf,lambda1,tau_max_crit,tau_avg_crit");
  Csv summary("strategy,level_set,disease_free_cells,total_cells");
  ExperimentOutput out;
  for (const auto& s : strategies) {
    SweepSpec spec = base;
    const std::string kind = s.value("strategy", "");
    if (kind == "global") {
      spec.strategy = StrategyKind::Global;
    } else if (kind == "targeted") {
      spec.strategy = StrategyKind::Targeted;
    } else {
      throw ConfigError("params.strategies: unknown strategy '" + kind + "'");
    }
    spec.level_set = s.value("levels", std::vector<int>{});
    const SisSweepGrid grid = intervention_sweep(g, spec);
    for (const auto& r : grid.rows) {
      csv.row(r.strategy, r.level_set, r.c, r.seed, r.tau, r.budget, r.rho_inf, r.lambda1, r.tau_max_crit,
              r.tau_avg_crit);
    }
    const std::size_t free = grid.disease_free(extinction);
    summary.row(std::string(to_string(spec.strategy)), level_set_label(spec.level_set), free, grid.rows.size());
    out.notes.push_back(std::string(to_string(spec.strategy)) + " [" + level_set_label(spec.level_set) +
                        "]: " + std::to_string(free) + "/" + std::to_string(grid.rows.size()) + " disease-free cells");
  }
  out.files.push_back({"sis_sweep.csv", csv.str()});
  out.files.push_back({"sis_summary.csv", summary.str()});
  return out;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  const Graphon g = graphon_from_json(cfg.graphon);
  if (cfg.experiment == "spectrum") return run_spectrum(cfg, g);
  if (cfg.experiment == "projectors") return run_projectors(cfg, g);
  if (cfg.experiment == "detect") return run_detect(cfg, g);
  if (cfg.experiment == "threshold") return run_threshold(cfg, g);
  if (cfg.experiment == "commute") return run_commute(cfg, g);
  if (cfg.experiment == "sis") return run_sis(cfg, g);
  throw ConfigError("unknown experiment '" + cfg.experiment + "'");
}

void write_outputs(const ExperimentOutput& output, const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    f << content;
  };
  for (const auto& file : output.files) write(file.name, file.content);
  write("manifest.json", to_manifest(cfg).dump(2) + "\n");
}

}  // namespace ugraphon
