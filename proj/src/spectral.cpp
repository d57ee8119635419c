#include "ugraphon/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>

#include "ugraphon/error.hpp"
#include "ugraphon/parallel.hpp"

namespace ugraphon {

std::vector<double> ClosedFormSpectrum::expanded() const {
  std::vector<double> out;
  out.reserve(n);
  for (const auto& e : entries) out.insert(out.end(), e.multiplicity, e.eigenvalue);
  return out;
}

const SpectrumEntry& ClosedFormSpectrum::entry(NodeId id) const {
  for (const auto& e : entries) {
    if (e.node == id) return e;
  }
  throw std::out_of_range("node carries no eigenvalue at this resolution");
}

ClosedFormSpectrum closed_form_spectrum(const Graphon& g, const SampleGrid& grid, bool clique_atoms) {
  if (g.is_one_level()) {
    throw std::invalid_argument("closed-form spectrum needs an ultrametric-mode graphon");
  }
  const auto& tree = g.tree();
  const double scale = static_cast<double>(grid.n);
  ClosedFormSpectrum spec;
  spec.n = grid.n;
  spec.entries.push_back({std::nullopt, 0.0, 1, 0});
  for (const TreeNode& node : tree.nodes()) {
    std::size_t mult = 0;
    if (!node.is_finest()) {
      mult = node.children.size() - 1;
    } else {
      const std::size_t m = grid.count(tree, node.id);
      if (m >= 2) mult = m - 1;
    }
    if (mult == 0) continue;
    spec.entries.push_back({node.id, -scale * nu_value(g, node.id, clique_atoms), mult, 0});
  }

  auto& entries = spec.entries;
  std::stable_sort(entries.begin() + 1, entries.end(),
                   [](const auto& a, const auto& b) { return a.eigenvalue > b.eigenvalue; });
  // Within runs of numerically equal eigenvalues, order by level then left endpoint.
  const double tol = 1e-9 * std::max(1.0, scale);
  auto key = [&](const SpectrumEntry& e) {
    if (!e.node) return std::make_pair(0, Rational(-1));
    const TreeNode& n = tree.node(*e.node);
    return std::make_pair(n.level, n.lo);
  };
  for (std::size_t start = 0; start < entries.size();) {
    std::size_t end = start + 1;
    while (end < entries.size() && entries[end - 1].eigenvalue - entries[end].eigenvalue <= tol) ++end;
    std::stable_sort(entries.begin() + static_cast<std::ptrdiff_t>(start),
                     entries.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](const auto& a, const auto& b) { return key(a) < key(b); });
    start = end;
  }
  std::size_t offset = 0;
  for (auto& e : entries) {
    e.offset = offset;
    offset += e.multiplicity;
  }
  if (offset != grid.n) throw NumericalError("closed-form multiplicities do not sum to N_k");
  return spec;
}

Eigen::MatrixXd closed_form_projector(const UltrametricTree& tree, const SampleGrid& grid, NodeId id) {
  const TreeNode& node = tree.node(id);
  const auto n = static_cast<Eigen::Index>(grid.n);
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
  const auto [lo, hi] = grid.range(tree, id);
  const double m = static_cast<double>(hi - lo);
  const auto blo = static_cast<Eigen::Index>(lo);
  const auto len = static_cast<Eigen::Index>(hi - lo);
  if (node.is_finest()) {
    if (hi - lo < 2) throw std::invalid_argument("finest node " + node.label + " holds fewer than two points");
    e.block(blo, blo, len, len).setConstant(-1.0 / m);
    e.block(blo, blo, len, len).diagonal().array() += 1.0;
    return e;
  }
  e.block(blo, blo, len, len).setConstant(-1.0 / m);
  for (NodeId child : node.children) {
    const auto [clo, chi] = grid.range(tree, child);
    const auto c0 = static_cast<Eigen::Index>(clo);
    const auto clen = static_cast<Eigen::Index>(chi - clo);
    e.block(c0, c0, clen, clen).array() += 1.0 / static_cast<double>(chi - clo);
  }
  return e;
}

SpectralBlock spectral_block(const ClosedFormSpectrum& spectrum, NodeId node, double rel_tol) {
  const double target = spectrum.entry(node).eigenvalue;
  const double tol = rel_tol * std::max<double>(1.0, static_cast<double>(spectrum.n));
  SpectralBlock block;
  bool first = true;
  for (const auto& e : spectrum.entries) {
    if (std::abs(e.eigenvalue - target) > tol) continue;
    if (first) block.begin = e.offset;
    first = false;
    block.count += e.multiplicity;
    if (e.node) block.nodes.push_back(*e.node);
  }
  return block;
}

Eigen::MatrixXd block_projector(const UltrametricTree& tree, const SampleGrid& grid,
                                const SpectralBlock& block) {
  const auto n = static_cast<Eigen::Index>(grid.n);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  std::size_t rank = 0;
  for (NodeId id : block.nodes) {
    sum += closed_form_projector(tree, grid, id);
    const TreeNode& node = tree.node(id);
    rank += node.is_finest() ? grid.count(tree, id) - 1 : node.children.size() - 1;
  }
  if (rank < block.count) sum.array() += 1.0 / static_cast<double>(n);  // block holds the constant mode
  return sum;
}

Eigen::MatrixXd empirical_projector(const EigenDecomposition& eig, std::size_t begin, std::size_t count) {
  const auto v = eig.vectors.middleCols(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(count));
  return v * v.transpose();
}

double spectral_gap(const ClosedFormSpectrum& spectrum, NodeId node, double rel_tol) {
  const double target = spectrum.entry(node).eigenvalue;
  const double scale = std::max<double>(1.0, static_cast<double>(spectrum.n));
  double gap = INFINITY;
  for (const auto& e : spectrum.entries) {
    const double d = std::abs(e.eigenvalue - target);
    if (d > rel_tol * scale) gap = std::min(gap, d);
  }
  return gap / static_cast<double>(spectrum.n);
}

bool nearest_selection_differs(const Eigen::VectorXd& values, const SpectralBlock& block, double target) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(values[a] - target) < std::abs(values[b] - target);
  });
  for (std::size_t r = 0; r < block.count && r < idx.size(); ++r) {
    if (idx[r] < block.begin || idx[r] >= block.begin + block.count) return true;
  }
  return false;
}

PairingReport pairing_experiment(const Graphon& g, const std::vector<int>& ks,
                                 const std::vector<std::uint64_t>& seeds, bool clique_atoms) {
  PairingReport report;
  SamplingOptions options;
  options.clique_atoms = clique_atoms;
  double num = 0.0;
  double den = 0.0;
  for (int k : ks) {
    const SampleGrid grid = build_grid(g.tree(), k);
    const std::vector<double> det = closed_form_spectrum(g, grid, clique_atoms).expanded();
    const double n = static_cast<double>(grid.n);
    std::vector<PairingRow> rows(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t s) {
      const SampledGraph sample = sample_random(g, grid, seeds[s], options);
      const Eigen::VectorXd values = empirical_spectrum(sample.laplacian, false).values;
      PairingRow& row = rows[s];
      row.k = k;
      row.n = grid.n;
      row.seed = seeds[s];
      for (std::size_t i = 0; i < grid.n; ++i) {
        row.det_over_n.push_back(det[i] / n);
        row.rand_over_n.push_back(values[static_cast<Eigen::Index>(i)] / n);
        row.max_error = std::max(row.max_error, std::abs(row.det_over_n.back() - row.rand_over_n.back()));
      }
    });
    std::vector<double> maxima;
    for (auto& row : rows) {
      maxima.push_back(row.max_error);
      report.rows.push_back(std::move(row));
    }
    const double med = median(maxima);
    report.per_k.push_back({k, grid.n, med});
    const double s = 1.0 / std::sqrt(n);
    num += med * s;
    den += s * s;
  }
  report.fitted_c = den > 0.0 ? num / den : 0.0;
  return report;
}

ProjectorResult projector_from_decomposition(const UltrametricTree& tree, const SampleGrid& grid,
                                             const ClosedFormSpectrum& spectrum,
                                             const EigenDecomposition& eig, NodeId node, double gamma) {
  const SpectralBlock block = spectral_block(spectrum, node);
  const Eigen::MatrixXd ehat = empirical_projector(eig, block.begin, block.count);
  const Eigen::MatrixXd e = block_projector(tree, grid, block);
  ProjectorResult r;
  r.node = node;
  r.frobenius_error = (ehat - e).norm();
  r.delta = spectral_gap(spectrum, node);
  const double n = static_cast<double>(grid.n);
  r.bound = 2.0 * std::sqrt(2.0) * static_cast<double>(block.count) * std::pow(n, gamma - 0.5) / r.delta;
  r.merged = block.merged();
  r.nearest_differs = nearest_selection_differs(eig.values, block, spectrum.entry(node).eigenvalue);
  return r;
}

ProjectorResult projector_experiment(const Graphon& g, NodeId node, int k, std::uint64_t seed, double gamma) {
  const SampleGrid grid = build_grid(g.tree(), k);
  const ClosedFormSpectrum spectrum = closed_form_spectrum(g, grid);
  const SampledGraph sample = sample_random(g, grid, seed);
  const EigenDecomposition eig = empirical_spectrum(sample.laplacian);
  return projector_from_decomposition(g.tree(), grid, spectrum, eig, node, gamma);
}

DetectionResult detect_from_projector(const Eigen::MatrixXd& projector, const UltrametricTree& tree,
                                      const SampleGrid& grid, NodeId id, double zero_tol) {
  const TreeNode& node = tree.node(id);
  if (node.children.size() < 2) throw std::invalid_argument("detection needs a node with two or more children");
  const auto [lo, hi] = grid.range(tree, id);
  const std::size_t m = hi - lo;
  if (zero_tol <= 0.0) zero_tol = 1.0 / (4.0 * static_cast<double>(m));

  std::vector<int> truth(m);
  for (std::size_t c = 0; c < node.children.size(); ++c) {
    const auto [clo, chi] = grid.range(tree, node.children[c]);
    for (std::size_t v = clo; v < chi; ++v) truth[v - lo] = static_cast<int>(c);
  }

  std::vector<int> component(m, -1);
  int n_comp = 0;
  for (std::size_t s = 0; s < m; ++s) {
    if (component[s] >= 0) continue;
    std::deque<std::size_t> queue{s};
    component[s] = n_comp;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v = 0; v < m; ++v) {
        if (component[v] >= 0) continue;
        if (projector(static_cast<Eigen::Index>(lo + u), static_cast<Eigen::Index>(lo + v)) > zero_tol) {
          component[v] = n_comp;
          queue.push_back(v);
        }
      }
    }
    ++n_comp;
  }

  const std::size_t n_children = node.children.size();
  std::vector<std::vector<std::size_t>> overlap(static_cast<std::size_t>(n_comp),
                                                std::vector<std::size_t>(n_children, 0));
  for (std::size_t v = 0; v < m; ++v) ++overlap[static_cast<std::size_t>(component[v])][static_cast<std::size_t>(truth[v])];

  std::vector<int> comp_to_child(static_cast<std::size_t>(n_comp), -1);
  std::vector<bool> child_used(n_children, false);
  std::size_t matched = 0;
  for (;;) {
    std::size_t best = 0;
    int bc = -1;
    std::size_t bchild = 0;
    for (int c = 0; c < n_comp; ++c) {
      if (comp_to_child[static_cast<std::size_t>(c)] >= 0) continue;
      for (std::size_t ch = 0; ch < n_children; ++ch) {
        if (!child_used[ch] && overlap[static_cast<std::size_t>(c)][ch] > best) {
          best = overlap[static_cast<std::size_t>(c)][ch];
          bc = c;
          bchild = ch;
        }
      }
    }
    if (bc < 0) break;
    comp_to_child[static_cast<std::size_t>(bc)] = static_cast<int>(bchild);
    child_used[bchild] = true;
    matched += best;
  }

  DetectionResult r;
  r.node = id;
  r.n_components = static_cast<std::size_t>(n_comp);
  r.misassigned = m - matched;
  r.ambiguous = r.n_components != n_children;
  r.labels.resize(m);
  for (std::size_t v = 0; v < m; ++v) {
    const int c = component[v];
    const int child = comp_to_child[static_cast<std::size_t>(c)];
    r.labels[v] = child >= 0 ? child : static_cast<int>(n_children) + c;
  }
  return r;
}

DetectionResult detect_children(const Graphon& g, NodeId node, int k, std::uint64_t seed, double zero_tol) {
  const SampleGrid grid = build_grid(g.tree(), k);
  const ClosedFormSpectrum spectrum = closed_form_spectrum(g, grid);
  const SampledGraph sample = sample_random(g, grid, seed);
  const EigenDecomposition eig = empirical_spectrum(sample.laplacian);
  const SpectralBlock block = spectral_block(spectrum, node);
  DetectionResult r =
      detect_from_projector(empirical_projector(eig, block.begin, block.count), g.tree(), grid, node, zero_tol);
  r.merged_block = block.merged();
  return r;
}

ThresholdReport detectability_threshold(const Graphon& g, int k) {
  if (!g.is_one_level()) throw std::invalid_argument("detectability threshold needs a one-level graphon");
  const auto& tree = g.tree();
  const SampleGrid grid = build_grid(tree, k);
  const SampledGraph det = sample_deterministic(g, grid);
  const auto& children = tree.root().children;

  ThresholdReport report;
  report.inter_prob = g.inter_prob();
  report.p_star = INFINITY;
  for (std::size_t c = 0; c < children.size(); ++c) {
    const auto [lo, hi] = grid.range(tree, children[c]);
    if (hi - lo < 2) {
      throw ConfigError("child " + tree.node(children[c]).label + " holds fewer than two grid points");
    }
    const auto len = static_cast<Eigen::Index>(hi - lo);
    const Eigen::MatrixXd a = det.adjacency.block(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(lo), len, len);
    const Eigen::VectorXd values = empirical_spectrum(laplacian_of(a), false).values;
    const double rho = -values[1] / static_cast<double>(len);
    report.rho.push_back(rho);
    if (rho < report.p_star) {
      report.p_star = rho;
      report.argmin_child = c;
    }
  }
  report.regime = report.inter_prob < report.p_star ? Regime::Detectable : Regime::Undetectable;

  const EigenDecomposition eig = empirical_spectrum(det.laplacian);
  const double tol = 1e-9 * static_cast<double>(grid.n);
  std::size_t count = 1;
  while (1 + count < grid.n && std::abs(eig.values[static_cast<Eigen::Index>(1 + count)] - eig.values[1]) <= tol) {
    ++count;
  }
  const Eigen::MatrixXd fiedler = empirical_projector(eig, 1, count);

  report.fiedler_support = FiedlerSupport::Mixed;
  for (std::size_t c = 0; c < children.size(); ++c) {
    const auto [lo, hi] = grid.range(tree, children[c]);
    Eigen::MatrixXd outside = fiedler;
    const auto len = static_cast<Eigen::Index>(hi - lo);
    outside.block(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(lo), len, len).setZero();
    if (outside.cwiseAbs().maxCoeff() < 1e-8) {
      report.fiedler_support = FiedlerSupport::SingleChild;
      report.support_child = c;
      return report;
    }
  }
  const Eigen::MatrixXd root = closed_form_projector(tree, grid, tree.root().id);
  if ((fiedler - root).cwiseAbs().maxCoeff() < 1e-8) report.fiedler_support = FiedlerSupport::Root;
  return report;
}

VRootCheck v_root_eigencheck(const Graphon& g, const SampleGrid& grid) {
  if (!g.is_one_level()) throw std::invalid_argument("V_root check needs a one-level graphon");
  const auto& tree = g.tree();
  const Eigen::MatrixXd l = sample_deterministic(g, grid).laplacian;
  const double shift = g.inter_prob() * static_cast<double>(grid.n);
  const auto& children = tree.root().children;
  VRootCheck check;
  for (std::size_t c = 0; c + 1 < children.size(); ++c) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.n));
    for (std::size_t side = 0; side < 2; ++side) {
      const auto [lo, hi] = grid.range(tree, children[c + side]);
      const double v = (side == 0 ? 1.0 : -1.0) / static_cast<double>(hi - lo);
      f.segment(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(hi - lo)).setConstant(v);
    }
    check.residual = std::max(check.residual, (l * f + shift * f).cwiseAbs().maxCoeff());
    ++check.dimension;
  }
  return check;
}

CheegerResult cheeger_bounds(const Eigen::MatrixXd& a, std::size_t exact_max_n) {
  const auto n = static_cast<std::size_t>(a.rows());
  if (n > exact_max_n) {
    throw std::invalid_argument("exact conductance limited to " + std::to_string(exact_max_n) + " vertices");
  }
  if (n < 2) throw std::invalid_argument("conductance needs at least two vertices");
  const DegreeStats stats = degree_stats(a);
  // Connectivity check by BFS.
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v = 0; v < n; ++v) {
      if (!seen[v] && a(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) > 0.0) {
        seen[v] = true;
        ++reached;
        queue.push_back(v);
      }
    }
  }
  if (reached != n) throw std::invalid_argument("conductance needs a connected graph");

  const double total = std::accumulate(stats.degrees.begin(), stats.degrees.end(), 0.0);
  double phi = INFINITY;
  std::uint64_t mask = 0;
  double cut = 0.0;
  double vol = 0.0;
  // Gray-code walk: each step toggles one vertex and updates cut and volume in O(n).
  for (std::uint64_t step = 1; step < (std::uint64_t{1} << n); ++step) {
    const auto v = static_cast<std::size_t>(__builtin_ctzll(step));
    double to_set = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      if ((mask >> u) & 1U) to_set += a(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u));
    }
    const double dv = stats.degrees[v];
    if ((mask >> v) & 1U) {
      mask &= ~(std::uint64_t{1} << v);
      to_set -= a(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(v));
      cut -= dv - 2.0 * to_set;
      vol -= dv;
    } else {
      mask |= std::uint64_t{1} << v;
      cut += dv - 2.0 * to_set;
      vol += dv;
    }
    if (vol > 0.0 && vol <= 0.5 * total + 1e-12) phi = std::min(phi, cut / vol);
  }
  CheegerResult r;
  r.phi = phi;
  r.lower = stats.min_degree * phi * phi / 2.0;
  r.upper = 2.0 * stats.max_degree * phi;
  r.lambda2 = -empirical_spectrum(laplacian_of(a), false).values[1];
  return r;
}

const char* to_string(FiedlerSupport s) {
  switch (s) {
    case FiedlerSupport::Root: return "root";
    case FiedlerSupport::SingleChild: return "single_child";
    case FiedlerSupport::Mixed: return "mixed";
  }
  return "unknown";
}

const char* to_string(Regime r) {
  return r == Regime::Detectable ? "detectable" : "undetectable";
}

}  // namespace ugraphon
