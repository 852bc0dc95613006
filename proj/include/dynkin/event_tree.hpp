// Multi-period stopping games on finite event trees: the backward-induction
// value process, the first-touch stopping equilibrium, and expected payoffs
// of arbitrary adapted stopping profiles.
#pragma once

#include <string>
#include <vector>

#include "dynkin/game.hpp"

namespace dynkin {

struct TreeChild {
  int node = -1;
  double probability = 0.0;
};

struct TreeNode {
  int time = 0;
  std::vector<double> x;  // exercise payoffs at this node, one per player
  std::vector<TreeChild> children;
};

// A finite rooted tree encoding the filtration: nodes carry the adapted
// payoff process, edges carry transition probabilities. Construction
// validates probabilities, times and reachability; malformed trees are
// rejected, never repaired.
class EventTree {
 public:
  EventTree(int players, std::vector<TreeNode> nodes, int root,
            std::vector<std::string> labels = {},
            double tolerance = kDefaultTolerance);

  int players() const { return players_; }
  int horizon() const { return horizon_; }
  int root() const { return root_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const TreeNode& node(int i) const { return nodes_[i]; }
  const std::string& label(int i) const { return labels_[i]; }

  // Node indices ordered by decreasing time (leaves first); every child
  // appears before its parent.
  const std::vector<int>& backward_order() const { return backward_order_; }

  bool is_leaf(int i) const { return nodes_[i].children.empty(); }
  bool is_chain() const;

 private:
  int players_;
  int root_;
  int horizon_ = 0;
  std::vector<TreeNode> nodes_;
  std::vector<std::string> labels_;
  std::vector<int> backward_order_;
};

// stop[player][node]: the player stops there unless already stopped on the
// path from the root. Leaves must be stopping nodes for everyone.
struct StoppingRule {
  std::vector<std::vector<std::uint8_t>> stop;
};

// u[node] is the value vector of the game started at that node.
using ValueProcess = std::vector<std::vector<double>>;

// Leaves carry their payoffs; every internal node projects the expected
// child value onto its exercise orthant. Single backward pass.
ValueProcess value_process(const EventTree& tree, const WeightSystem& w);

// Player i stops wherever the value has been pulled down to the exercise
// payoff (within tolerance). Includes all leaves by construction.
StoppingRule equilibrium_stopping(const EventTree& tree, const ValueProcess& u,
                                  double tolerance = kDefaultTolerance);

// Expected payoff of an arbitrary profile. The game stops at the first node
// where anyone stops; stoppers collect the node payoff, everyone else the
// hyperplane payoff of the expected continuation value (taken from u).
PayoffVector evaluate_stopping_profile(const EventTree& tree, const WeightSystem& w,
                                       const StoppingRule& s, const ValueProcess& u);

// Variant that pays non-stoppers from the horizon payoffs instead of the
// continuation value. Only defined on chains (deterministic trees).
PayoffVector evaluate_natural_variant(const EventTree& tree, const WeightSystem& w,
                                      const StoppingRule& s);

// Convenience: the chain with rows x[t][k] (t = 0..T).
EventTree chain_tree(int players, const std::vector<std::vector<double>>& rows,
                     double tolerance = kDefaultTolerance);

}  // namespace dynkin
