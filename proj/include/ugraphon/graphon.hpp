#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ugraphon/ultra_tree.hpp"

namespace ugraphon {

/// Connection-probability profile w. Exponential reads the node height;
/// the level-indexed variants read the node level.
class Kernel {
 public:
  struct Exponential {
    double sigma = 0.1;
  };
  /// level (root = 1) -> probability.
  struct LevelTable {
    std::map<int, double> levels;
  };
  /// w_l = w_min + (w_max - w_min) (l / depth)^gamma with l the LCA depth
  /// (root depth 0, so tree level minus one).
  struct PowerLawLevels {
    double w_min = 0.0;
    double w_max = 1.0;
    double gamma = 1.0;
    int depth = 1;
  };
  using Variant = std::variant<Exponential, LevelTable, PowerLawLevels>;

  static Kernel exponential(double sigma);
  static Kernel level_table(std::map<int, double> levels);
  static Kernel power_law(double w_min, double w_max, double gamma, int depth);

  /// Value attached to a node with the given height and level, in [0,1].
  double operator()(double height, int level) const;
  /// w(0): 1 for Exponential; level kernels reuse the deepest level value.
  double at_zero(int finest_level) const;

  const Variant& variant() const { return variant_; }

 private:
  explicit Kernel(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

/// Symmetric intra-community kernel of a one-level graphon, evaluated on
/// global coordinates of two points inside the same root child.
using IntraKernel = std::function<double(double, double)>;

struct IntraKernelSpec {
  enum class Type { Ultrametric, Constant };
  Type type = Type::Ultrametric;
  double q = 0.0;  // Constant only
};

/// W(x,y) = w(d(x,y)) on an ultrametric tree, optionally with per-node
/// multiplicative overrides (interventions), or the one-level variant whose
/// root children carry arbitrary intra kernels and a shared inter probability.
class Graphon {
 public:
  Graphon(std::shared_ptr<const UltrametricTree> tree, Kernel kernel);

  /// One-level hierarchical graphon over the root children of `tree`.
  static Graphon one_level(std::shared_ptr<const UltrametricTree> tree, Kernel kernel,
                           std::vector<IntraKernelSpec> intra, double inter_prob);

  const UltrametricTree& tree() const { return *tree_; }
  std::shared_ptr<const UltrametricTree> tree_ptr() const { return tree_; }
  const Kernel& kernel() const { return kernel_; }

  bool is_one_level() const { return one_level_.has_value(); }
  double inter_prob() const;
  const std::vector<IntraKernelSpec>& intra_specs() const;
  double intra_value(std::size_t child, double x, double y) const;

  double evaluate(double x, double y) const;

  /// Value of W on (I x J) for two finest nodes, off the diagonal x = y.
  /// Every graphon here is constant on such blocks.
  double block_value(NodeId a, NodeId b) const;

  /// Kernel value on node I after overrides: w(h(I)) * factor(I), in [0,1].
  double node_value(NodeId id) const;
  double factor(NodeId id) const { return factors_.at(index_of(id)); }

  /// Copy with factor(id) multiplied by `multiplier` (must be in (0,1]).
  Graphon scaled(NodeId id, double multiplier) const;

 private:
  struct OneLevel {
    std::vector<IntraKernelSpec> intra;
    double inter_prob = 0.0;
  };

  std::shared_ptr<const UltrametricTree> tree_;
  Kernel kernel_;
  std::vector<double> factors_;
  std::optional<OneLevel> one_level_;
};

double evaluate(const Graphon& g, double x, double y);

/// nu(I) = sum over the ancestry chain of mu(I_m) (w(I_m) - w(F(I_m))) with
/// the father-of-root value taken as 0. With `clique_atoms` the finest-level
/// value is 1.
double nu_value(const Graphon& g, NodeId id, bool clique_atoms = false);

/// Expected degree density of a point in finest interval `id`: the block sum
/// sum_J mu(J) W(I, J), with W(I, I) the intra-interval value.
double degree_density(const Graphon& g, NodeId finest, bool clique_atoms = false);

struct GlobalAtLevel {
  int level = 1;
};

/// Reduce the communities on the ancestry chain of `target`. Empty `levels`
/// means every strict ancestor of the target.
struct TargetedPath {
  NodeId target{};
  std::vector<int> levels;
};

using InterventionStrategy = std::variant<GlobalAtLevel, TargetedPath>;

/// GlobalAtLevel shares the budget equally among the n_l communities of the
/// level, scaling each by 1 - (B + eps)/n_l (n_l = 2^(l-1) on binary trees);
/// TargetedPath scales each selected path node by 1 - (B + eps).
Graphon apply_intervention(const Graphon& g, const InterventionStrategy& strategy, double budget,
                           double epsilon = 1e-3);

}  // namespace ugraphon
