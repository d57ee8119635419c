#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

namespace ugraphon {

using Rational = boost::rational<std::int64_t>;

/// Index of a node inside its owning tree. Ids are dense and assigned in
/// depth-first, left-to-right order, so the root is always NodeId{0}.
enum class NodeId : std::uint32_t {};

constexpr std::size_t index_of(NodeId id) { return static_cast<std::size_t>(id); }
constexpr NodeId node_id(std::size_t index) { return static_cast<NodeId>(index); }

double to_double(const Rational& r);

struct TreeNode {
  NodeId id{};
  Rational lo{0};
  Rational hi{1};
  int level = 1;  // root = 1, finest = depth()
  double height = 1.0;
  std::vector<NodeId> children;
  std::optional<NodeId> parent;
  std::string label;

  Rational length() const { return hi - lo; }
  bool is_finest() const { return children.empty(); }
  /// Half-open membership [lo, hi); the interval ending at 1 is closed.
  bool contains(double x) const;
};

/// Plain description of a subtree, used to author trees and to serialize them.
struct NodeSpec {
  Rational lo{0};
  Rational hi{1};
  double height = 1.0;
  std::string label;
  std::vector<NodeSpec> children;
};

/// Nested interval partitions of [0,1] with heights: the hierarchy behind
/// every graphon in this library. Immutable after construction.
class UltrametricTree {
 public:
  /// Validates the partition invariants and throws ConfigError naming the
  /// path of the first offending node (e.g. "root/1/0").
  explicit UltrametricTree(const NodeSpec& root);

  const TreeNode& root() const { return nodes_.front(); }
  const TreeNode& node(NodeId id) const;
  std::span<const TreeNode> nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

  /// Number of levels M.
  int depth() const { return depth_; }

  /// Finest-level nodes ordered left to right.
  const std::vector<NodeId>& finest() const { return finest_; }
  std::vector<NodeId> nodes_at_level(int level) const;

  /// Least common multiple of the finest interval length denominators.
  std::int64_t denominator_lcm() const { return lcm_; }

  std::optional<NodeId> find(std::string_view label) const;

  const TreeNode& finest_containing(double x) const;
  const TreeNode& lca(double x, double y) const;
  NodeId lca(NodeId a, NodeId b) const;
  double distance(double x, double y) const;

  /// Root-first chain I_1 = [0,1] ⊃ ... ⊃ node.
  std::vector<NodeId> ancestry_chain(NodeId id) const;

  /// Position of `child` among its parent's children.
  std::size_t child_rank(NodeId child) const;

  /// The ancestor of `id` (or `id` itself) sitting at `level`.
  NodeId ancestor_at_level(NodeId id, int level) const;

  NodeSpec to_spec() const;

 private:
  NodeId add(const NodeSpec& spec, std::optional<NodeId> parent, int level, const std::string& path);
  NodeSpec spec_of(NodeId id) const;

  std::vector<TreeNode> nodes_;
  std::vector<NodeId> finest_;
  int depth_ = 0;
  std::int64_t lcm_ = 1;
};

// Free-function forms of the tree queries.
const TreeNode& lca(const UltrametricTree& tree, double x, double y);
double ultrametric_distance(const UltrametricTree& tree, double x, double y);
std::vector<NodeId> ancestry_chain(const UltrametricTree& tree, NodeId id);

/// Draws p ~ Beta(a, b) as X / (X + Y) with X ~ Gamma(a), Y ~ Gamma(b).
double sample_beta(double a, double b, std::mt19937_64& rng);

/// Random binary tree of `depth` split levels (2^depth finest intervals,
/// M = depth + 1 levels). Each internal node splits at p ~ Beta(c, c); split
/// points are snapped to the common grid 1/denominator so every finest length
/// is a multiple of 1/denominator, and each child keeps at least one cell per
/// finest descendant. Level l gets height 1 - (l - 1)/(depth + 1).
UltrametricTree random_binary_tree(int depth, double concentration, std::uint64_t seed,
                                   std::int64_t denominator = 10000);

}  // namespace ugraphon
