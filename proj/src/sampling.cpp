#include "ugraphon/sampling.hpp"

#include <ostream>
#include <stdexcept>

#include "ugraphon/error.hpp"
#include "ugraphon/format.hpp"

namespace ugraphon {

std::pair<std::size_t, std::size_t> SampleGrid::range(const UltrametricTree& tree, NodeId id) const {
  const TreeNode& node = tree.node(id);
  const auto scale = static_cast<std::int64_t>(n);
  const Rational lo = node.lo * scale;
  const Rational hi = node.hi * scale;
  if (lo.denominator() != 1 || hi.denominator() != 1) {
    throw std::invalid_argument("grid does not resolve node " + node.label);
  }
  return {static_cast<std::size_t>(lo.numerator()), static_cast<std::size_t>(hi.numerator())};
}

std::size_t SampleGrid::count(const UltrametricTree& tree, NodeId id) const {
  const auto [lo, hi] = range(tree, id);
  return hi - lo;
}

SampleGrid build_grid(const UltrametricTree& tree, int k, std::int64_t lcm_cap) {
  if (k < 1) throw ConfigError("grid multiplier k must be >= 1");
  const std::int64_t base = tree.denominator_lcm();
  if (base > lcm_cap) {
    throw ConfigError("denominator LCM " + std::to_string(base) + " exceeds cap " +
                      std::to_string(lcm_cap));
  }
  SampleGrid grid;
  grid.k = k;
  grid.base = base;
  grid.n = static_cast<std::size_t>(base) * static_cast<std::size_t>(k);
  grid.points.resize(grid.n);
  grid.finest_assignment.resize(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    grid.points[i] = static_cast<double>(i) / static_cast<double>(grid.n);
  }
  for (NodeId f : tree.finest()) {
    const auto [lo, hi] = grid.range(tree, f);
    for (std::size_t i = lo; i < hi; ++i) grid.finest_assignment[i] = f;
  }
  return grid;
}

Eigen::MatrixXd finest_block_values(const Graphon& g, bool clique_atoms) {
  const auto& finest = g.tree().finest();
  const auto f = static_cast<Eigen::Index>(finest.size());
  Eigen::MatrixXd blocks(f, f);
  for (Eigen::Index a = 0; a < f; ++a) {
    for (Eigen::Index b = a; b < f; ++b) {
      const double v = (a == b && clique_atoms) ? 1.0 : g.block_value(finest[a], finest[b]);
      blocks(a, b) = v;
      blocks(b, a) = v;
    }
  }
  return blocks;
}

namespace {

std::vector<Eigen::Index> finest_ranks(const UltrametricTree& tree, const SampleGrid& grid) {
  std::vector<Eigen::Index> rank_of(tree.size(), -1);
  for (std::size_t r = 0; r < tree.finest().size(); ++r) {
    rank_of[index_of(tree.finest()[r])] = static_cast<Eigen::Index>(r);
  }
  std::vector<Eigen::Index> ranks(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) ranks[i] = rank_of[index_of(grid.finest_assignment[i])];
  return ranks;
}

void check_size(const SampleGrid& grid, const SamplingOptions& options) {
  if (grid.n > options.max_vertices) {
    throw ConfigError("N_k = " + std::to_string(grid.n) + " exceeds max_vertices " +
                      std::to_string(options.max_vertices));
  }
}

}  // namespace

SampledGraph sample_deterministic(const Graphon& g, const SampleGrid& grid,
                                  const SamplingOptions& options) {
  check_size(grid, options);
  const Eigen::MatrixXd blocks = finest_block_values(g, options.clique_atoms);
  const auto ranks = finest_ranks(g.tree(), grid);
  const auto n = static_cast<Eigen::Index>(grid.n);
  SampledGraph out;
  out.grid = grid;
  out.clique_atoms = options.clique_atoms;
  out.adjacency.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) out.adjacency(i, j) = blocks(ranks[i], ranks[j]);
    out.adjacency(j, j) = 0.0;
  }
  out.laplacian = laplacian_of(out.adjacency);
  return out;
}

SampledGraph sample_random(const Graphon& g, const SampleGrid& grid, std::uint64_t seed,
                           const SamplingOptions& options) {
  check_size(grid, options);
  const Eigen::MatrixXd blocks = finest_block_values(g, options.clique_atoms);
  const auto ranks = finest_ranks(g.tree(), grid);
  const auto n = static_cast<Eigen::Index>(grid.n);
  SampledGraph out;
  out.grid = grid;
  out.seed = seed;
  out.clique_atoms = options.clique_atoms;
  out.adjacency = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 1; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double p = blocks(ranks[i], ranks[j]);
      const double u = counter_uniform(seed, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      if (u < p) {
        out.adjacency(i, j) = 1.0;
        out.adjacency(j, i) = 1.0;
      }
    }
  }
  out.laplacian = laplacian_of(out.adjacency);
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::size_t i, std::size_t j) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(i));
  h = splitmix64(h ^ (static_cast<std::uint64_t>(j) << 1));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

Eigen::MatrixXd laplacian_of(const Eigen::MatrixXd& adjacency) {
  Eigen::MatrixXd l = adjacency;
  l.diagonal().setZero();
  const Eigen::VectorXd degrees = l.rowwise().sum();
  l.diagonal() = -degrees;
  return l;
}

DegreeStats degree_stats(const Eigen::MatrixXd& adjacency) {
  DegreeStats stats;
  const Eigen::Index n = adjacency.rows();
  stats.degrees.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    stats.degrees[i] = adjacency.row(i).sum() - adjacency(i, i);
  }
  if (n == 0) return stats;
  const Eigen::Map<const Eigen::VectorXd> d(stats.degrees.data(), n);
  stats.max_degree = d.maxCoeff();
  stats.min_degree = d.minCoeff();
  stats.mean_degree = d.mean();
  return stats;
}

void write_triples_csv(std::ostream& out, const Eigen::MatrixXd& a) {
  out << "i,j,value\n";
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i; j < a.cols(); ++j) {
      if (a(i, j) != 0.0) out << i << ',' << j << ',' << fmt_double(a(i, j)) << '\n';
    }
  }
}

void write_dense_csv(std::ostream& out, const Eigen::MatrixXd& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j) out << ',';
      out << fmt_double(a(i, j));
    }
    out << '\n';
  }
}

}  // namespace ugraphon
