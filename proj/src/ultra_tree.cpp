#include "ugraphon/ultra_tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ugraphon/error.hpp"

namespace ugraphon {

namespace {

std::string format_rational(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

void check_unit(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::out_of_range("point " + std::to_string(x) + " outside [0,1]");
  }
}

}  // namespace

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

bool TreeNode::contains(double x) const {
  const double a = to_double(lo);
  const double b = to_double(hi);
  if (x < a) return false;
  if (x < b) return true;
  return hi == Rational(1) && x <= 1.0;
}

UltrametricTree::UltrametricTree(const NodeSpec& root) {
  if (root.lo != Rational(0) || root.hi != Rational(1)) {
    throw ConfigError("root: interval must be [0,1], got " + format_rational(root.lo) + ".." +
                      format_rational(root.hi));
  }
  add(root, std::nullopt, 1, "root");

  for (const auto& n : nodes_) {
    if (n.is_finest()) {
      if (depth_ == 0) depth_ = n.level;
      if (n.level != depth_) {
        throw ConfigError("finest intervals must all sit at the same level (found levels " +
                          std::to_string(depth_) + " and " + std::to_string(n.level) + ")");
      }
      finest_.push_back(n.id);
    }
  }

  constexpr std::int64_t kLimit = std::int64_t{1} << 52;
  for (NodeId id : finest_) {
    const std::int64_t den = node(id).length().denominator();
    const std::int64_t g = std::gcd(lcm_, den);
    const std::int64_t factor = den / g;
    if (lcm_ > kLimit / factor) {
      throw ConfigError("denominator LCM of finest interval lengths overflows");
    }
    lcm_ *= factor;
  }
}

NodeId UltrametricTree::add(const NodeSpec& spec, std::optional<NodeId> parent, int level,
                            const std::string& path) {
  if (!(spec.lo < spec.hi)) {
    throw ConfigError(path + ": empty interval " + format_rational(spec.lo) + ".." +
                      format_rational(spec.hi));
  }
  if (!(spec.height > 0.0) || !std::isfinite(spec.height)) {
    throw ConfigError(path + ": height must be positive and finite");
  }
  if (parent && !(spec.height < node(*parent).height)) {
    throw ConfigError(path + ": height " + std::to_string(spec.height) +
                      " must be strictly below parent height " +
                      std::to_string(node(*parent).height));
  }
  if (spec.children.size() == 1) {
    throw ConfigError(path + ": internal nodes need at least two children");
  }
  if (!spec.children.empty()) {
    Rational cursor = spec.lo;
    for (std::size_t i = 0; i < spec.children.size(); ++i) {
      const auto& c = spec.children[i];
      if (c.lo != cursor) {
        throw ConfigError(path + "/" + std::to_string(i) + ": child starts at " +
                          format_rational(c.lo) + " but previous sibling ends at " +
                          format_rational(cursor));
      }
      cursor = c.hi;
    }
    if (cursor != spec.hi) {
      throw ConfigError(path + ": children end at " + format_rational(cursor) +
                        " instead of " + format_rational(spec.hi));
    }
  }

  const NodeId id = node_id(nodes_.size());
  TreeNode n;
  n.id = id;
  n.lo = spec.lo;
  n.hi = spec.hi;
  n.level = level;
  n.height = spec.height;
  n.parent = parent;
  n.label = spec.label.empty() ? path : spec.label;
  nodes_.push_back(std::move(n));

  std::vector<NodeId> kids;
  for (std::size_t i = 0; i < spec.children.size(); ++i) {
    kids.push_back(add(spec.children[i], id, level + 1, path + "/" + std::to_string(i)));
  }
  nodes_[index_of(id)].children = std::move(kids);
  return id;
}

const TreeNode& UltrametricTree::node(NodeId id) const {
  if (index_of(id) >= nodes_.size()) {
    throw std::out_of_range("unknown node id " + std::to_string(index_of(id)));
  }
  return nodes_[index_of(id)];
}

std::vector<NodeId> UltrametricTree::nodes_at_level(int level) const {
  std::vector<NodeId> out;
  for (const auto& n : nodes_) {
    if (n.level == level) out.push_back(n.id);
  }
  std::sort(out.begin(), out.end(),
            [this](NodeId a, NodeId b) { return node(a).lo < node(b).lo; });
  return out;
}

std::optional<NodeId> UltrametricTree::find(std::string_view label) const {
  for (const auto& n : nodes_) {
    if (n.label == label) return n.id;
  }
  return std::nullopt;
}

const TreeNode& UltrametricTree::finest_containing(double x) const {
  check_unit(x);
  const TreeNode* cur = &root();
  while (!cur->is_finest()) {
    const TreeNode* next = nullptr;
    for (NodeId c : cur->children) {
      if (node(c).contains(x)) {
        next = &node(c);
        break;
      }
    }
    if (next == nullptr) break;  // unreachable for a validated partition
    cur = next;
  }
  return *cur;
}

const TreeNode& UltrametricTree::lca(double x, double y) const {
  check_unit(x);
  check_unit(y);
  const TreeNode* cur = &root();
  while (!cur->is_finest()) {
    const TreeNode* next = nullptr;
    for (NodeId c : cur->children) {
      const TreeNode& child = node(c);
      if (child.contains(x)) {
        if (child.contains(y)) next = &child;
        break;
      }
    }
    if (next == nullptr) break;
    cur = next;
  }
  return *cur;
}

NodeId UltrametricTree::lca(NodeId a, NodeId b) const {
  while (node(a).level > node(b).level) a = *node(a).parent;
  while (node(b).level > node(a).level) b = *node(b).parent;
  while (a != b) {
    a = *node(a).parent;
    b = *node(b).parent;
  }
  return a;
}

double UltrametricTree::distance(double x, double y) const {
  const TreeNode& meet = lca(x, y);
  return x == y ? 0.0 : meet.height;
}

std::vector<NodeId> UltrametricTree::ancestry_chain(NodeId id) const {
  std::vector<NodeId> chain;
  std::optional<NodeId> cur = node(id).id;
  while (cur) {
    chain.push_back(*cur);
    cur = node(*cur).parent;
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

std::size_t UltrametricTree::child_rank(NodeId child) const {
  const auto& n = node(child);
  if (!n.parent) return 0;
  const auto& siblings = node(*n.parent).children;
  return static_cast<std::size_t>(std::find(siblings.begin(), siblings.end(), child) -
                                  siblings.begin());
}

NodeId UltrametricTree::ancestor_at_level(NodeId id, int level) const {
  if (level < 1 || level > node(id).level) {
    throw std::out_of_range("no ancestor at level " + std::to_string(level));
  }
  while (node(id).level > level) id = *node(id).parent;
  return id;
}

NodeSpec UltrametricTree::spec_of(NodeId id) const {
  const auto& n = node(id);
  NodeSpec s;
  s.lo = n.lo;
  s.hi = n.hi;
  s.height = n.height;
  s.label = n.label;
  for (NodeId c : n.children) s.children.push_back(spec_of(c));
  return s;
}

NodeSpec UltrametricTree::to_spec() const { return spec_of(root().id); }

const TreeNode& lca(const UltrametricTree& tree, double x, double y) { return tree.lca(x, y); }

double ultrametric_distance(const UltrametricTree& tree, double x, double y) {
  return tree.distance(x, y);
}

std::vector<NodeId> ancestry_chain(const UltrametricTree& tree, NodeId id) {
  return tree.ancestry_chain(id);
}

double sample_beta(double a, double b, std::mt19937_64& rng) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return x / (x + y);
}

UltrametricTree random_binary_tree(int depth, double concentration, std::uint64_t seed,
                                   std::int64_t denominator) {
  if (depth < 1) throw ConfigError("random tree depth must be >= 1");
  if (!(concentration > 0.0)) throw ConfigError("Beta concentration must be > 0");
  if (depth > 30 || denominator < (std::int64_t{1} << depth)) {
    throw ConfigError("denominator " + std::to_string(denominator) +
                      " cannot host 2^" + std::to_string(depth) + " finest intervals");
  }

  std::mt19937_64 rng(seed);
  const auto height_of = [depth](int level) {
    return 1.0 - static_cast<double>(level - 1) / static_cast<double>(depth + 1);
  };

  // Intervals are tracked as integer cell ranges [lo, hi) of the 1/denominator grid.
  std::function<NodeSpec(std::int64_t, std::int64_t, int)> grow =
      [&](std::int64_t lo, std::int64_t hi, int level) {
        NodeSpec s;
        s.lo = Rational(lo, denominator);
        s.hi = Rational(hi, denominator);
        s.height = height_of(level);
        const int remaining = depth + 1 - level;
        if (remaining == 0) return s;
        const std::int64_t cells = hi - lo;
        const std::int64_t reserve = std::int64_t{1} << (remaining - 1);
        const double p = sample_beta(concentration, concentration, rng);
        std::int64_t left = std::llround(p * static_cast<double>(cells));
        left = std::clamp(left, reserve, cells - reserve);
        s.children.push_back(grow(lo, lo + left, level + 1));
        s.children.push_back(grow(lo + left, hi, level + 1));
        return s;
      };

  NodeSpec root = grow(0, denominator, 1);
  root.label = "root";
  return UltrametricTree(root);
}

}  // namespace ugraphon
