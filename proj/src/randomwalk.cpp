#include "ugraphon/randomwalk.hpp"

#include <algorithm>
#include <stdexcept>

#include "ugraphon/error.hpp"
#include "ugraphon/linalg.hpp"
#include "ugraphon/parallel.hpp"

namespace ugraphon {

PseudoInverse pseudo_inverse(const Eigen::MatrixXd& laplacian, double zero_cutoff) {
  PseudoInverse out;
  out.zero_cutoff = zero_cutoff;
  const Eigen::Index n = laplacian.rows();
  if (n == 0) return out;
  const EigenDecomposition eig = empirical_spectrum(laplacian);
  const double threshold = zero_cutoff * static_cast<double>(n);
  Eigen::VectorXd inv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(eig.values[i]) > threshold) {
      inv[i] = 1.0 / eig.values[i];
    } else {
      inv[i] = 0.0;
      ++out.zeroed;
    }
  }
  out.matrix = eig.vectors * inv.asDiagonal() * eig.vectors.transpose();
  return out;
}

PseudoInverse closed_form_pseudo_inverse(const Graphon& g, const SampleGrid& grid, bool clique_atoms) {
  const auto& tree = g.tree();
  const auto n = static_cast<Eigen::Index>(grid.n);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  for (const TreeNode& node : tree.nodes()) {
    const auto [lo, hi] = grid.range(tree, node.id);
    const std::size_t m = hi - lo;
    if (node.is_finest() && m < 2) continue;
    const double nu = nu_value(g, node.id, clique_atoms);
    if (!(nu > 0.0)) throw NumericalError("nu(" + node.label + ") is not positive; graph is disconnected");
    const double c = 1.0 / nu;
    const auto b = static_cast<Eigen::Index>(lo);
    const auto len = static_cast<Eigen::Index>(m);
    sum.block(b, b, len, len).array() -= c / static_cast<double>(m);
    if (node.is_finest()) {
      sum.block(b, b, len, len).diagonal().array() += c;
      continue;
    }
    for (NodeId child : node.children) {
      const auto [clo, chi] = grid.range(tree, child);
      const auto cb = static_cast<Eigen::Index>(clo);
      const auto clen = static_cast<Eigen::Index>(chi - clo);
      sum.block(cb, cb, clen, clen).array() += c / static_cast<double>(chi - clo);
    }
  }
  PseudoInverse out;
  out.matrix = -sum / static_cast<double>(n);
  out.zeroed = 1;
  return out;
}

WalkTimes walk_times(const PseudoInverse& pinv, std::size_t n) {
  if (pinv.disconnected()) throw NumericalError("walk times need a connected graph");
  const Eigen::MatrixXd& p = pinv.matrix;
  const double scale = static_cast<double>(n) * static_cast<double>(n);
  WalkTimes out;
  out.hitting = p;
  out.hitting.rowwise() -= p.diagonal().transpose();
  out.hitting *= scale;
  out.hitting.diagonal().setZero();
  out.commute = out.hitting + out.hitting.transpose();
  return out;
}

double projector_kernel(const UltrametricTree& tree, NodeId id, double x, double y) {
  const TreeNode& node = tree.node(id);
  if (node.is_finest()) throw std::invalid_argument("continuum projector kernel needs an internal node");
  if (!node.contains(x) || !node.contains(y)) return 0.0;
  const NodeId cx = tree.ancestor_at_level(tree.finest_containing(x).id, node.level + 1);
  const double mu = to_double(node.length());
  if (tree.node(cx).contains(y)) return 1.0 / to_double(tree.node(cx).length()) - 1.0 / mu;
  return -1.0 / mu;
}

Eigen::MatrixXd projector_kernel_matrix(const UltrametricTree& tree, const SampleGrid& grid, NodeId id) {
  const auto n = static_cast<Eigen::Index>(grid.n);
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      out(i, j) = projector_kernel(tree, id, grid.points[static_cast<std::size_t>(i)],
                                   grid.points[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

double hs_operator_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("operator distance needs matrices of equal shape");
  }
  if (a.rows() == 0) return 0.0;
  return (a - b).norm() / static_cast<double>(a.rows());
}

CollapseReport collapse_experiment(const Graphon& g, const std::vector<int>& ks,
                                   const std::vector<std::uint64_t>& seeds, std::size_t pairs,
                                   bool deterministic) {
  const auto& tree = g.tree();
  if (tree.finest().size() < 2) throw std::invalid_argument("commute collapse needs two finest intervals");
  if (seeds.empty()) throw std::invalid_argument("commute collapse needs at least one seed");
  std::vector<double> nu(tree.size(), 0.0);
  std::vector<double> degree(tree.size(), 0.0);
  std::vector<double> parent_nu(tree.size(), 0.0);
  for (NodeId f : tree.finest()) {
    nu[index_of(f)] = nu_value(g, f, true);
    degree[index_of(f)] = degree_density(g, f, true);
    parent_nu[index_of(f)] = nu_value(g, *tree.node(f).parent, true);
  }
  const std::vector<std::uint64_t> used = deterministic ? std::vector<std::uint64_t>{seeds.front()} : seeds;

  SamplingOptions options;
  options.clique_atoms = true;
  CollapseReport report;
  for (int k : ks) {
    const SampleGrid grid = build_grid(tree, k);
    const double n = static_cast<double>(grid.n);
    std::vector<std::vector<CommuteRow>> per_seed(used.size());
    std::vector<bool> skipped(used.size(), false);
    parallel_for(used.size(), [&](std::size_t s) {
      const SampledGraph sample =
          deterministic ? sample_deterministic(g, grid, options) : sample_random(g, grid, used[s], options);
      const PseudoInverse pinv = pseudo_inverse(sample.laplacian);
      if (pinv.disconnected()) {
        skipped[s] = true;
        return;
      }
      const Eigen::MatrixXd& p = pinv.matrix;
      const std::uint64_t pair_seed = used[s] ^ 0x5bd1e995ULL;
      std::size_t draw = 0;
      while (per_seed[s].size() < pairs) {
        const auto i = static_cast<std::size_t>(counter_uniform(pair_seed, draw, 0) * n);
        const auto j = static_cast<std::size_t>(counter_uniform(pair_seed, draw, 1) * n);
        ++draw;
        const NodeId fi = grid.finest_assignment[i];
        const NodeId fj = grid.finest_assignment[j];
        if (fi == fj) continue;
        const auto ii = static_cast<Eigen::Index>(i);
        const auto jj = static_cast<Eigen::Index>(j);
        CommuteRow row;
        row.k = k;
        row.n = grid.n;
        row.seed = used[s];
        row.i = i;
        row.j = j;
        row.finest_i = fi;
        row.finest_j = fj;
        // C_ij / N_k = N_k (2 L+_ij - L+_ii - L+_jj)
        row.c_over_n = n * (2.0 * p(ii, jj) - p(ii, ii) - p(jj, jj));
        row.limit = 1.0 / nu[index_of(fi)] + 1.0 / nu[index_of(fj)];
        row.degree_limit = 1.0 / degree[index_of(fi)] + 1.0 / degree[index_of(fj)];
        row.parent_limit = 1.0 / parent_nu[index_of(fi)] + 1.0 / parent_nu[index_of(fj)];
        per_seed[s].push_back(row);
      }
    });

    CollapseSummary summary;
    summary.k = k;
    summary.n = grid.n;
    std::vector<double> err, rel, deg, par;
    for (std::size_t s = 0; s < used.size(); ++s) {
      if (skipped[s]) {
        ++summary.skipped_seeds;
        continue;
      }
      std::vector<double> e, r, d, q;
      for (const auto& row : per_seed[s]) {
        e.push_back(row.abs_error());
        r.push_back(row.abs_error() / row.limit);
        d.push_back(std::abs(row.c_over_n - row.degree_limit));
        q.push_back(std::abs(row.c_over_n - row.parent_limit));
        summary.max_error = std::max(summary.max_error, row.abs_error());
        report.rows.push_back(row);
      }
      err.push_back(median(e));
      rel.push_back(median(r));
      deg.push_back(median(d));
      par.push_back(median(q));
    }
    if (!err.empty()) {
      summary.median_error = median(err);
      summary.median_relative = median(rel);
      summary.median_degree_error = median(deg);
      summary.median_parent_error = median(par);
    }
    report.per_k.push_back(summary);
  }
  return report;
}

}  // namespace ugraphon
