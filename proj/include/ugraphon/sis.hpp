#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ugraphon/graphon.hpp"
#include "ugraphon/sampling.hpp"

namespace ugraphon {

/// dx_i/dt = -delta x_i + beta sum_j a_ij x_j (1 - x_i).
struct SisModel {
  double beta = 0.0;
  double delta_rec = 1.0;
  Eigen::MatrixXd adjacency;
  Eigen::VectorXd x0;
};

struct SisTrajectory {
  std::vector<double> times;
  std::vector<double> prevalence;  // mean of x(t) at each recorded time
  Eigen::VectorXd final_state;
  std::size_t steps = 0;
  std::size_t clipped = 0;  // components pushed back into [0,1]
};

/// Fixed-step RK4 on [0, t_end]; the step is halved until two successive
/// refinements agree to `tol` in sup norm at t_end (at most 12 halvings).
SisTrajectory integrate_sis(const SisModel& model, double t_end, double tol = 1e-6, int max_halvings = 12);

struct EquilibriumOptions {
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  /// Return 0 without iterating when lambda_1 beta / delta <= 1.
  bool spectral_shortcut = true;
};

/// rho_inf = mean of the fixed point of x <- beta A x / (delta + beta A x)
/// started from 0.5. Throws NumericalError when the iteration stalls.
double equilibrium_prevalence(const SisModel& model, const EquilibriumOptions& options = {});

/// Same, with lambda_1(A) supplied by the caller.
double equilibrium_prevalence(const SisModel& model, double lambda1, const EquilibriumOptions& options = {});

struct StabilityBounds {
  double sum_mu_nu = 0.0;
  double max_nu = 0.0;
  double lambda1 = 0.0;        // power iteration on the sample
  double lambda1_det = 0.0;    // exact, on A_det
  double mean_degree = 0.0;
  double max_degree = 0.0;
  /// Endemic: sum mu nu > delta / (N_k beta) + eta.
  bool endemic_sufficient = false;
  /// Disease free: delta / (N_k beta) > max nu + eta.
  bool disease_free_sufficient = false;
  bool bracket_holds = false;  // mean degree <= lambda1 <= max degree
};

StabilityBounds stability_bounds(const Graphon& g, const SampledGraph& sample, double beta,
                                 double delta_rec, double eta = 0.05);

/// Sum_i mu(I_i) nu(I_i) and max_i nu(I_i) over the finest intervals.
std::pair<double, double> nu_summary(const Graphon& g, bool clique_atoms = false);

/// Finest interval with the largest nu; ties go to the leftmost.
NodeId find_max_community(const Graphon& g);

enum class StrategyKind { Global, Targeted };

struct SweepSpec {
  StrategyKind strategy = StrategyKind::Global;
  std::vector<int> level_set;  // Global: exactly one level; Targeted: empty = all strict ancestors
  std::vector<double> taus;
  std::vector<double> budgets;
  int k = 1;
  std::vector<std::uint64_t> seeds;
  double epsilon = 1e-3;
  double delta_rec = 1.0;
  double concentration = 0.0;  // reported only
};

struct SweepRow {
  std::string strategy;
  std::string level_set;
  double c = 0.0;
  std::uint64_t seed = 0;
  double tau = 0.0;
  double budget = 0.0;
  double rho_inf = 0.0;
  double lambda1 = 0.0;
  double tau_max_crit = 0.0;
  double tau_avg_crit = 0.0;
  std::size_t n = 0;
};

struct SisSweepGrid {
  std::vector<SweepRow> rows;
  /// Cells with rho_inf below `extinction_tol`.
  std::size_t disease_free(double extinction_tol = 1e-4) const;
};

/// For every (seed, B): intervene on the base graphon, draw one sample and
/// evaluate rho_inf at each tau with beta = tau / N_k. Samples share the
/// counter-based uniforms, so a larger budget only removes edges.
SisSweepGrid intervention_sweep(const Graphon& base, const SweepSpec& spec);

std::string level_set_label(const std::vector<int>& levels);
const char* to_string(StrategyKind s);

}  // namespace ugraphon
