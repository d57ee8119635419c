#include "ugraphon/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "ugraphon/error.hpp"

namespace ugraphon {

Kernel Kernel::exponential(double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("exponential kernel needs sigma > 0");
  return Kernel(Exponential{sigma});
}

Kernel Kernel::level_table(std::map<int, double> levels) {
  if (levels.empty()) throw ConfigError("level table kernel needs at least one level");
  for (auto& [level, p] : levels) {
    if (level < 1) throw ConfigError("level table keys start at 1 (root)");
    if (p < 0.0 || p > 1.0) {
      std::cerr << "warning: level table value " << p << " at level " << level
                << " clamped to [0,1]\n";
      p = std::clamp(p, 0.0, 1.0);
    }
  }
  return Kernel(LevelTable{std::move(levels)});
}

Kernel Kernel::power_law(double w_min, double w_max, double gamma, int depth) {
  if (!(0.0 <= w_min && w_min <= w_max && w_max <= 1.0)) {
    throw ConfigError("power-law kernel needs 0 <= w_min <= w_max <= 1");
  }
  if (!(gamma > 0.0)) throw ConfigError("power-law kernel needs gamma > 0");
  if (depth < 1) throw ConfigError("power-law kernel needs depth >= 1");
  return Kernel(PowerLawLevels{w_min, w_max, gamma, depth});
}

double Kernel::operator()(double height, int level) const {
  struct Visitor {
    double height;
    int level;
    double operator()(const Exponential& k) const { return std::exp(-height / k.sigma); }
    double operator()(const LevelTable& k) const {
      auto it = k.levels.find(level);
      if (it == k.levels.end()) {
        throw ConfigError("level table kernel has no entry for level " + std::to_string(level));
      }
      return it->second;
    }
    double operator()(const PowerLawLevels& k) const {
      const double t = static_cast<double>(level - 1) / static_cast<double>(k.depth);
      return std::clamp(k.w_min + (k.w_max - k.w_min) * std::pow(t, k.gamma), 0.0, 1.0);
    }
  };
  return std::visit(Visitor{height, level}, variant_);
}

double Kernel::at_zero(int finest_level) const {
  if (std::holds_alternative<Exponential>(variant_)) return 1.0;
  return (*this)(0.0, finest_level);
}

Graphon::Graphon(std::shared_ptr<const UltrametricTree> tree, Kernel kernel)
    : tree_(std::move(tree)), kernel_(std::move(kernel)) {
  if (!tree_) throw std::invalid_argument("graphon needs a tree");
  factors_.assign(tree_->size(), 1.0);
  if (const auto* table = std::get_if<Kernel::LevelTable>(&kernel_.variant())) {
    for (int level = 1; level <= tree_->depth(); ++level) {
      if (!table->levels.contains(level)) {
        throw ConfigError("level table kernel misses level " + std::to_string(level));
      }
    }
  }
  if (const auto* pl = std::get_if<Kernel::PowerLawLevels>(&kernel_.variant())) {
    if (pl->depth < tree_->depth() - 1) {
      throw ConfigError("power-law kernel depth " + std::to_string(pl->depth) +
                        " is shallower than the tree (" + std::to_string(tree_->depth() - 1) +
                        " split levels)");
    }
  }
}

Graphon Graphon::one_level(std::shared_ptr<const UltrametricTree> tree, Kernel kernel,
                           std::vector<IntraKernelSpec> intra, double inter_prob) {
  Graphon g(std::move(tree), std::move(kernel));
  const std::size_t children = g.tree().root().children.size();
  if (children < 2) throw ConfigError("one-level graphon needs at least two root children");
  if (intra.size() == 1) intra.assign(children, intra.front());
  if (intra.size() != children) {
    throw ConfigError("one-level graphon needs one intra kernel per root child (" +
                      std::to_string(children) + "), got " + std::to_string(intra.size()));
  }
  for (const auto& spec : intra) {
    if (spec.type == IntraKernelSpec::Type::Constant && (spec.q < 0.0 || spec.q > 1.0)) {
      throw ConfigError("constant intra kernel must lie in [0,1]");
    }
  }
  if (inter_prob < 0.0 || inter_prob > 1.0) {
    throw ConfigError("inter-community probability must lie in [0,1]");
  }
  g.one_level_ = OneLevel{std::move(intra), inter_prob};
  return g;
}

double Graphon::inter_prob() const {
  if (!one_level_) return node_value(tree_->root().id);
  return std::clamp(one_level_->inter_prob * factors_.front(), 0.0, 1.0);
}

const std::vector<IntraKernelSpec>& Graphon::intra_specs() const {
  if (!one_level_) throw std::logic_error("intra kernels exist only on one-level graphons");
  return one_level_->intra;
}

double Graphon::intra_value(std::size_t child, double x, double y) const {
  const auto& spec = intra_specs().at(child);
  if (spec.type == IntraKernelSpec::Type::Constant) return spec.q;
  if (x == y) return kernel_.at_zero(tree_->depth());
  return node_value(tree_->lca(x, y).id);
}

double Graphon::node_value(NodeId id) const {
  const TreeNode& n = tree_->node(id);
  if (one_level_ && !n.parent) return inter_prob();
  return std::clamp(kernel_(n.height, n.level) * factors_[index_of(id)], 0.0, 1.0);
}

double Graphon::evaluate(double x, double y) const {
  const TreeNode& meet = tree_->lca(x, y);
  if (one_level_) {
    if (!meet.parent) return inter_prob();
    const NodeId child = tree_->ancestor_at_level(meet.id, 2);
    return std::clamp(intra_value(tree_->child_rank(child), x, y), 0.0, 1.0);
  }
  if (x == y) return kernel_.at_zero(tree_->depth());
  return node_value(meet.id);
}

double Graphon::block_value(NodeId a, NodeId b) const {
  const NodeId meet = tree_->lca(a, b);
  if (one_level_) {
    if (meet == tree_->root().id) return inter_prob();
    const NodeId child = tree_->ancestor_at_level(meet, 2);
    const auto& spec = one_level_->intra.at(tree_->child_rank(child));
    if (spec.type == IntraKernelSpec::Type::Constant) return spec.q;
  }
  return node_value(meet);
}

Graphon Graphon::scaled(NodeId id, double multiplier) const {
  if (!(multiplier > 0.0 && multiplier <= 1.0)) {
    throw ConfigError("intervention factor " + std::to_string(multiplier) +
                      " outside (0,1]; budget too large for epsilon");
  }
  Graphon copy = *this;
  copy.factors_.at(index_of(id)) *= multiplier;
  return copy;
}

double evaluate(const Graphon& g, double x, double y) { return g.evaluate(x, y); }

namespace {

double chain_value(const Graphon& g, NodeId id, bool clique_atoms) {
  if (clique_atoms && g.tree().node(id).is_finest()) return 1.0;
  return g.node_value(id);
}

}  // namespace

double nu_value(const Graphon& g, NodeId id, bool clique_atoms) {
  if (g.is_one_level()) throw std::invalid_argument("nu is defined for ultrametric graphons only");
  const auto& tree = g.tree();
  double nu = 0.0;
  for (NodeId m : tree.ancestry_chain(id)) {
    const TreeNode& node = tree.node(m);
    const double here = chain_value(g, m, clique_atoms);
    const double father = node.parent ? chain_value(g, *node.parent, clique_atoms) : 0.0;
    nu += to_double(node.length()) * (here - father);
  }
  return nu;
}

double degree_density(const Graphon& g, NodeId finest, bool clique_atoms) {
  const auto& tree = g.tree();
  if (!tree.node(finest).is_finest()) throw std::invalid_argument("degree density needs a finest node");
  double total = 0.0;
  for (NodeId other : tree.finest()) {
    const NodeId meet = tree.lca(finest, other);
    const double w = (meet == finest && clique_atoms) ? 1.0 : g.node_value(meet);
    total += to_double(tree.node(other).length()) * w;
  }
  return total;
}

Graphon apply_intervention(const Graphon& g, const InterventionStrategy& strategy, double budget,
                           double epsilon) {
  if (!(budget >= 0.0 && budget <= 1.0)) throw ConfigError("budget must lie in [0,1]");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  const auto& tree = g.tree();
  Graphon out = g;

  if (const auto* global = std::get_if<GlobalAtLevel>(&strategy)) {
    if (global->level < 1 || global->level > tree.depth()) {
      throw ConfigError("intervention level " + std::to_string(global->level) + " not in tree");
    }
    const auto level_nodes = tree.nodes_at_level(global->level);
    const double factor = 1.0 - (budget + epsilon) / static_cast<double>(level_nodes.size());
    for (NodeId id : level_nodes) out = out.scaled(id, factor);
    return out;
  }

  const auto& targeted = std::get<TargetedPath>(strategy);
  const auto& target = tree.node(targeted.target);
  const double factor = 1.0 - (budget + epsilon);
  for (NodeId id : tree.ancestry_chain(target.id)) {
    const int level = tree.node(id).level;
    const bool selected =
        targeted.levels.empty()
            ? id != target.id
            : std::find(targeted.levels.begin(), targeted.levels.end(), level) !=
                  targeted.levels.end();
    if (selected) out = out.scaled(id, factor);
  }
  return out;
}

}  // namespace ugraphon
