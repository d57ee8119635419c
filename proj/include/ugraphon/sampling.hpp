#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ugraphon/graphon.hpp"

namespace ugraphon {

/// Uniform grid x_i = i / N_k with N_k = k * N, N the LCM of the finest
/// interval denominators. Every tree node I owns the contiguous index range
/// [N_k lo(I), N_k hi(I)).
struct SampleGrid {
  int k = 1;
  std::int64_t base = 1;  // N
  std::size_t n = 0;      // N_k
  std::vector<double> points;
  std::vector<NodeId> finest_assignment;

  /// Half-open vertex index range of `id`.
  std::pair<std::size_t, std::size_t> range(const UltrametricTree& tree, NodeId id) const;
  /// Counting measure m(I) = N_k mu(I).
  std::size_t count(const UltrametricTree& tree, NodeId id) const;
};

SampleGrid build_grid(const UltrametricTree& tree, int k, std::int64_t lcm_cap = 100000);

struct SamplingOptions {
  /// Force W = 1 between distinct points of the same finest interval.
  bool clique_atoms = false;
  std::size_t max_vertices = 5000;
};

struct SampledGraph {
  SampleGrid grid;
  Eigen::MatrixXd adjacency;
  Eigen::MatrixXd laplacian;  // A - D
  std::optional<std::uint64_t> seed;  // set for random samples
  bool clique_atoms = false;
};

/// Off-diagonal block values W(I, J) over finest nodes, indexed by finest rank.
Eigen::MatrixXd finest_block_values(const Graphon& g, bool clique_atoms = false);

SampledGraph sample_deterministic(const Graphon& g, const SampleGrid& grid,
                                  const SamplingOptions& options = {});
SampledGraph sample_random(const Graphon& g, const SampleGrid& grid, std::uint64_t seed,
                           const SamplingOptions& options = {});

/// Uniform in [0,1) keyed by (seed, i, j) with i < j; the same key always
/// yields the same value, so samples at different graphons share draws.
double counter_uniform(std::uint64_t seed, std::size_t i, std::size_t j);

Eigen::MatrixXd laplacian_of(const Eigen::MatrixXd& adjacency);

struct DegreeStats {
  double max_degree = 0.0;
  double min_degree = 0.0;
  double mean_degree = 0.0;
  std::vector<double> degrees;
};

DegreeStats degree_stats(const Eigen::MatrixXd& adjacency);

/// "i,j,value" rows for the nonzero upper-triangle entries.
void write_triples_csv(std::ostream& out, const Eigen::MatrixXd& a);
/// Dense row-major grid, one matrix row per line.
void write_dense_csv(std::ostream& out, const Eigen::MatrixXd& a);

}  // namespace ugraphon
