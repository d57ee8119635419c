#include "ugraphon/sis.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <tuple>

#include "ugraphon/error.hpp"
#include "ugraphon/linalg.hpp"
#include "ugraphon/parallel.hpp"

namespace ugraphon {

namespace {

void check_model(const SisModel& model) {
  if (!(model.beta >= 0.0)) throw std::invalid_argument("SIS infection rate must be >= 0");
  if (!(model.delta_rec > 0.0)) throw std::invalid_argument("SIS recovery rate must be > 0");
  if (model.adjacency.rows() != model.adjacency.cols() || model.adjacency.rows() != model.x0.size()) {
    throw std::invalid_argument("SIS adjacency and initial state sizes differ");
  }
  if (model.x0.size() > 0 && (model.x0.minCoeff() < 0.0 || model.x0.maxCoeff() > 1.0)) {
    throw std::invalid_argument("SIS initial state must lie in [0,1]");
  }
}

Eigen::VectorXd sis_rhs(const SisModel& m, const Eigen::VectorXd& x) {
  const Eigen::VectorXd pressure = m.beta * (m.adjacency * x);
  return -m.delta_rec * x + pressure.cwiseProduct(Eigen::VectorXd::Ones(x.size()) - x);
}

SisTrajectory rk4(const SisModel& m, double t_end, std::size_t steps) {
  SisTrajectory out;
  out.steps = steps;
  const double h = t_end / static_cast<double>(steps);
  Eigen::VectorXd x = m.x0;
  out.times.push_back(0.0);
  out.prevalence.push_back(x.size() ? x.mean() : 0.0);
  for (std::size_t s = 1; s <= steps; ++s) {
    const Eigen::VectorXd k1 = sis_rhs(m, x);
    const Eigen::VectorXd k2 = sis_rhs(m, x + 0.5 * h * k1);
    const Eigen::VectorXd k3 = sis_rhs(m, x + 0.5 * h * k2);
    const Eigen::VectorXd k4 = sis_rhs(m, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x[i] < 0.0 || x[i] > 1.0) {
        x[i] = std::clamp(x[i], 0.0, 1.0);
        ++out.clipped;
      }
    }
    out.times.push_back(h * static_cast<double>(s));
    out.prevalence.push_back(x.size() ? x.mean() : 0.0);
  }
  out.final_state = std::move(x);
  return out;
}

double largest_eigenvalue(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  return empirical_spectrum(a, false).values[0];
}

}  // namespace

SisTrajectory integrate_sis(const SisModel& model, double t_end, double tol, int max_halvings) {
  check_model(model);
  if (!(t_end > 0.0)) throw std::invalid_argument("SIS horizon must be > 0");
  const double max_row = model.adjacency.size() ? model.adjacency.rowwise().sum().maxCoeff() : 0.0;
  const double rate = model.delta_rec + model.beta * max_row;
  auto steps = static_cast<std::size_t>(std::max(64.0, std::ceil(t_end * rate)));
  SisTrajectory coarse = rk4(model, t_end, steps);
  for (int h = 0; h < max_halvings; ++h) {
    steps *= 2;
    SisTrajectory fine = rk4(model, t_end, steps);
    const double diff =
        fine.final_state.size() ? (fine.final_state - coarse.final_state).cwiseAbs().maxCoeff() : 0.0;
    if (diff < tol) {
      if (fine.clipped > 0) {
        std::cerr << "warning: SIS integration clipped " << fine.clipped << " state components\n";
      }
      return fine;
    }
    coarse = std::move(fine);
  }
  throw NumericalError("SIS integration did not converge after " + std::to_string(max_halvings) + " halvings");
}

double equilibrium_prevalence(const SisModel& model, const EquilibriumOptions& options) {
  check_model(model);
  return equilibrium_prevalence(model, largest_eigenvalue(model.adjacency), options);
}

double equilibrium_prevalence(const SisModel& model, double lambda1, const EquilibriumOptions& options) {
  const Eigen::Index n = model.adjacency.rows();
  if (n == 0) return 0.0;
  if (options.spectral_shortcut && lambda1 * model.beta / model.delta_rec <= 1.0) return 0.0;
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 0.5);
  for (std::size_t it = 0; it < options.max_iter; ++it) {
    const Eigen::VectorXd pressure = model.beta * (model.adjacency * x);
    Eigen::VectorXd next = pressure.array() / (model.delta_rec + pressure.array());
    const double change = (next - x).cwiseAbs().maxCoeff();
    x = std::move(next);
    if (change < options.tol) return x.mean();
  }
  throw NumericalError("SIS fixed-point iteration did not converge in " + std::to_string(options.max_iter) +
                       " steps");
}

std::pair<double, double> nu_summary(const Graphon& g, bool clique_atoms) {
  double sum = 0.0;
  double max = 0.0;
  for (NodeId f : g.tree().finest()) {
    const double nu = nu_value(g, f, clique_atoms);
    sum += to_double(g.tree().node(f).length()) * nu;
    max = std::max(max, nu);
  }
  return {sum, max};
}

StabilityBounds stability_bounds(const Graphon& g, const SampledGraph& sample, double beta, double delta_rec,
                                 double eta) {
  if (!(beta > 0.0) || !(delta_rec > 0.0)) throw std::invalid_argument("SIS rates must be > 0");
  StabilityBounds b;
  std::tie(b.sum_mu_nu, b.max_nu) = nu_summary(g, sample.clique_atoms);
  SamplingOptions options;
  options.clique_atoms = sample.clique_atoms;
  b.lambda1 = power_iteration(sample.adjacency);
  b.lambda1_det = largest_eigenvalue(sample_deterministic(g, sample.grid, options).adjacency);
  const DegreeStats stats = degree_stats(sample.adjacency);
  b.mean_degree = stats.mean_degree;
  b.max_degree = stats.max_degree;
  const double threshold = delta_rec / (static_cast<double>(sample.grid.n) * beta);
  b.endemic_sufficient = b.sum_mu_nu > threshold + eta;
  b.disease_free_sufficient = threshold > b.max_nu + eta;
  const double slack = 1e-9 * std::max(1.0, b.max_degree);
  b.bracket_holds = b.mean_degree <= b.lambda1 + slack && b.lambda1 <= b.max_degree + slack;
  return b;
}

NodeId find_max_community(const Graphon& g) {
  const auto& finest = g.tree().finest();
  NodeId best = finest.front();
  double best_nu = nu_value(g, best);
  for (NodeId f : finest) {
    const double nu = nu_value(g, f);
    if (nu > best_nu) {
      best = f;
      best_nu = nu;
    }
  }
  return best;
}

std::size_t SisSweepGrid::disease_free(double extinction_tol) const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [&](const SweepRow& r) { return r.rho_inf < extinction_tol; }));
}

std::string level_set_label(const std::vector<int>& levels) {
  if (levels.empty()) return "ancestors";
  std::string out;
  for (int l : levels) {
    if (!out.empty()) out += '+';
    out += std::to_string(l);
  }
  return out;
}

const char* to_string(StrategyKind s) { return s == StrategyKind::Global ? "global" : "targeted"; }

SisSweepGrid intervention_sweep(const Graphon& base, const SweepSpec& spec) {
  if (spec.taus.empty() || spec.budgets.empty() || spec.seeds.empty()) {
    throw ConfigError("SIS sweep needs nonempty tau, budget and seed lists");
  }
  if (spec.strategy == StrategyKind::Global && spec.level_set.empty()) {
    throw ConfigError("global strategy needs at least one level");
  }
  const NodeId target = find_max_community(base);
  const SampleGrid grid = build_grid(base.tree(), spec.k);
  const double n = static_cast<double>(grid.n);
  const std::string label = level_set_label(spec.level_set);

  const std::size_t cells = spec.seeds.size() * spec.budgets.size();
  std::vector<std::vector<SweepRow>> out(cells);
  parallel_for(cells, [&](std::size_t cell) {
    const std::uint64_t seed = spec.seeds[cell / spec.budgets.size()];
    const double budget = spec.budgets[cell % spec.budgets.size()];
    Graphon g = base;
    if (spec.strategy == StrategyKind::Global) {
      for (int level : spec.level_set) g = apply_intervention(g, GlobalAtLevel{level}, budget, spec.epsilon);
    } else {
      g = apply_intervention(g, TargetedPath{target, spec.level_set}, budget, spec.epsilon);
    }
    const auto [sum_nu, max_nu] = nu_summary(g);
    SisModel model;
    model.delta_rec = spec.delta_rec;
    model.adjacency = sample_random(g, grid, seed).adjacency;
    model.x0 = Eigen::VectorXd::Constant(model.adjacency.rows(), 0.5);
    const double lambda1 = largest_eigenvalue(model.adjacency);
    for (double tau : spec.taus) {
      model.beta = tau * spec.delta_rec / n;
      SweepRow row;
      row.strategy = to_string(spec.strategy);
      row.level_set = label;
      row.c = spec.concentration;
      row.seed = seed;
      row.tau = tau;
      row.budget = budget;
      row.rho_inf = equilibrium_prevalence(model, lambda1);
      row.lambda1 = lambda1;
      row.tau_max_crit = 1.0 / max_nu;
      row.tau_avg_crit = 1.0 / sum_nu;
      row.n = grid.n;
      out[cell].push_back(std::move(row));
    }
  });
  SisSweepGrid result;
  for (auto& cell : out) {
    for (auto& row : cell) result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace ugraphon
