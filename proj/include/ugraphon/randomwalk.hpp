#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ugraphon/graphon.hpp"
#include "ugraphon/sampling.hpp"

namespace ugraphon {

/// Moore-Penrose inverse of a Laplacian L = A - D. L is negative
/// semidefinite, so L+ is too: for K2, L+ = [[-1/4, 1/4], [1/4, -1/4]].
struct PseudoInverse {
  Eigen::MatrixXd matrix;
  double zero_cutoff = 1e-8;
  std::size_t zeroed = 0;  // eigenvalues treated as 0 (connected components)
  std::optional<std::uint64_t> seed;
  bool disconnected() const { return zeroed > 1; }
};

/// Eigenvalues with |lambda| <= zero_cutoff * N are treated as zero.
PseudoInverse pseudo_inverse(const Eigen::MatrixXd& laplacian, double zero_cutoff = 1e-8);

/// L_det+ assembled from the tree as -(1/N_k) sum_I E_I / nu(I) without an
/// eigensolve. `clique_atoms` sets the finest-level value to 1 (clique atoms).
PseudoInverse closed_form_pseudo_inverse(const Graphon& g, const SampleGrid& grid, bool clique_atoms = true);

/// Hitting and commute times of the walk with generator L / N_k.
struct WalkTimes {
  Eigen::MatrixXd hitting;  // m_ij = N_k^2 (L+_ij - L+_jj)
  Eigen::MatrixXd commute;  // C_ij = m_ij + m_ji
};

WalkTimes walk_times(const PseudoInverse& pinv, std::size_t n);

/// Continuum projector kernel E_I(x, y) of an internal node:
/// 1_J(x)1_J(y)/mu(J) - 1_I(x)1_I(y)/mu(I) with J the child containing x.
double projector_kernel(const UltrametricTree& tree, NodeId node, double x, double y);

/// E_I evaluated on grid pairs; equals N_k times the discrete projector.
Eigen::MatrixXd projector_kernel_matrix(const UltrametricTree& tree, const SampleGrid& grid, NodeId node);

/// ||T(A) - T(B)||_HS = ||A - B||_F / N for step kernels on an N-point grid.
double hs_operator_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

struct CommuteRow {
  int k = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  NodeId finest_i{};
  NodeId finest_j{};
  double c_over_n = 0.0;
  // 1/nu(F(i)) + 1/nu(F(j)) with F(v) the finest interval holding vertex v.
  double limit = 0.0;
  // Same limit from the expected degree densities (block sums of W).
  double degree_limit = 0.0;
  // Diagnostic: nu taken at the parents of the finest intervals.
  double parent_limit = 0.0;
  double abs_error() const { return std::abs(c_over_n - limit); }
};

struct CollapseSummary {
  int k = 0;
  std::size_t n = 0;
  double median_error = 0.0;        // median over seeds of the per-seed median pair error
  double median_relative = 0.0;     // same, relative to the limit
  double median_degree_error = 0.0;
  double median_parent_error = 0.0;
  double max_error = 0.0;
  std::size_t skipped_seeds = 0;    // disconnected samples
};

struct CollapseReport {
  std::vector<CommuteRow> rows;
  std::vector<CollapseSummary> per_k;
};

/// Commute times of clique-atom samples against the collapse limit, on
/// `pairs` vertex pairs per sample drawn from distinct finest intervals.
/// `deterministic` uses L_det instead of random samples (seed ignored).
CollapseReport collapse_experiment(const Graphon& g, const std::vector<int>& ks,
                                   const std::vector<std::uint64_t>& seeds, std::size_t pairs = 200,
                                   bool deterministic = false);

}  // namespace ugraphon
