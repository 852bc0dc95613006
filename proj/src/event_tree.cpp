#include "dynkin/event_tree.hpp"

#include <algorithm>
#include <cmath>

#include "dynkin/projection.hpp"

namespace dynkin {

EventTree::EventTree(int players, std::vector<TreeNode> nodes, int root,
                     std::vector<std::string> labels, double tolerance)
    : players_(players), root_(root), nodes_(std::move(nodes)), labels_(std::move(labels)) {
  if (players_ < 1 || players_ > kMaxPlayers)
    throw std::invalid_argument("event tree needs 1..62 players");
  const int n = node_count();
  if (n == 0) throw std::invalid_argument("event tree must have nodes");
  if (root_ < 0 || root_ >= n) throw std::invalid_argument("root index out of range");
  if (labels_.empty()) {
    for (int i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
  } else if (static_cast<int>(labels_.size()) != n) {
    throw std::invalid_argument("one label per node required");
  }

  for (int i = 0; i < n; ++i) {
    const TreeNode& nd = nodes_[i];
    if (static_cast<int>(nd.x.size()) != players_)
      throw std::invalid_argument("node '" + labels_[i] + "': payoff vector size mismatch");
    for (double v : nd.x)
      if (!std::isfinite(v))
        throw std::invalid_argument("node '" + labels_[i] + "': payoffs must be finite");
    if (!nd.children.empty()) {
      double total = 0.0;
      for (const TreeChild& c : nd.children) {
        if (c.node < 0 || c.node >= n)
          throw std::invalid_argument("node '" + labels_[i] + "': child index out of range");
        if (!(c.probability > 0.0) || !std::isfinite(c.probability))
          throw std::invalid_argument("node '" + labels_[i] +
                                      "': transition probabilities must be positive");
        if (nodes_[c.node].time != nd.time + 1)
          throw std::invalid_argument("node '" + labels_[i] +
                                      "': children must sit one period later");
        total += c.probability;
      }
      if (std::abs(total - 1.0) > tolerance)
        throw std::invalid_argument("node '" + labels_[i] +
                                    "': transition probabilities must sum to 1");
    }
    horizon_ = std::max(horizon_, nd.time);
  }
  if (nodes_[root_].time != 0) throw std::invalid_argument("root must sit at time 0");

  // Reachability and single-parent structure from the root.
  std::vector<int> seen(n, 0);
  std::vector<int> stack{root_};
  seen[root_] = 1;
  int reached = 0;
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    ++reached;
    if (nodes_[i].children.empty() && nodes_[i].time != horizon_)
      throw std::invalid_argument("node '" + labels_[i] +
                                  "': only horizon nodes may be leaves");
    for (const TreeChild& c : nodes_[i].children) {
      if (seen[c.node])
        throw std::invalid_argument("node '" + labels_[c.node] + "' has two parents");
      seen[c.node] = 1;
      stack.push_back(c.node);
    }
  }
  if (reached != n)
    throw std::invalid_argument("every node must be reachable from the root");

  backward_order_.resize(n);
  for (int i = 0; i < n; ++i) backward_order_[i] = i;
  std::stable_sort(backward_order_.begin(), backward_order_.end(),
                   [&](int a, int b) { return nodes_[a].time > nodes_[b].time; });
}

bool EventTree::is_chain() const {
  for (const TreeNode& nd : nodes_)
    if (nd.children.size() > 1) return false;
  return true;
}

ValueProcess value_process(const EventTree& tree, const WeightSystem& w) {
  if (w.players() != tree.players())
    throw std::invalid_argument("weight system does not match the tree");
  const int m = tree.players();
  ValueProcess u(tree.node_count());
  for (int i : tree.backward_order()) {
    const TreeNode& nd = tree.node(i);
    if (tree.is_leaf(i)) {
      u[i] = nd.x;
      continue;
    }
    std::vector<double> expected(m, 0.0);
    for (const TreeChild& c : nd.children)
      for (int k = 0; k < m; ++k) expected[k] += c.probability * u[c.node][k];
    u[i] = project_orthant(expected, OrthantSpec{nd.x}, w).point;
  }
  return u;
}

StoppingRule equilibrium_stopping(const EventTree& tree, const ValueProcess& u,
                                  double tolerance) {
  const int m = tree.players();
  StoppingRule rule;
  rule.stop.assign(m, std::vector<std::uint8_t>(tree.node_count(), 0));
  for (int i = 0; i < tree.node_count(); ++i)
    for (int k = 0; k < m; ++k)
      rule.stop[k][i] =
          tree.is_leaf(i) || u[i][k] <= tree.node(i).x[k] + tolerance ? 1 : 0;
  return rule;
}

namespace {

void check_rule(const EventTree& tree, const StoppingRule& s) {
  if (static_cast<int>(s.stop.size()) != tree.players())
    throw std::invalid_argument("stopping rule must cover every player");
  for (const auto& per_player : s.stop) {
    if (static_cast<int>(per_player.size()) != tree.node_count())
      throw std::invalid_argument("stopping rule must cover every node");
  }
  for (int i = 0; i < tree.node_count(); ++i)
    if (tree.is_leaf(i))
      for (const auto& per_player : s.stop)
        if (!per_player[i])
          throw std::invalid_argument("every player must stop at every leaf");
}

PayoffVector evaluate_from(const EventTree& tree, const WeightSystem& w,
                           const StoppingRule& s, const ValueProcess& u, int i) {
  const int m = tree.players();
  const TreeNode& nd = tree.node(i);
  ExerciseSet stoppers;
  for (int k = 0; k < m; ++k)
    if (s.stop[k][i]) stoppers.add(k);

  if (tree.is_leaf(i)) return nd.x;

  std::vector<double> expected(m, 0.0);
  if (stoppers.empty()) {
    for (const TreeChild& c : nd.children) {
      const PayoffVector sub = evaluate_from(tree, w, s, u, c.node);
      for (int k = 0; k < m; ++k) expected[k] += c.probability * sub[k];
    }
    return expected;
  }
  // Stopped here: continuation values come from the value process.
  for (const TreeChild& c : nd.children)
    for (int k = 0; k < m; ++k) expected[k] += c.probability * u[c.node][k];
  return project_hyperplane(expected, stoppers, nd.x, w);
}

}  // namespace

PayoffVector evaluate_stopping_profile(const EventTree& tree, const WeightSystem& w,
                                       const StoppingRule& s, const ValueProcess& u) {
  check_rule(tree, s);
  if (static_cast<int>(u.size()) != tree.node_count())
    throw std::invalid_argument("value process does not match the tree");
  return evaluate_from(tree, w, s, u, tree.root());
}

PayoffVector evaluate_natural_variant(const EventTree& tree, const WeightSystem& w,
                                      const StoppingRule& s) {
  if (!tree.is_chain())
    throw std::invalid_argument("the natural variant is defined on chains only");
  check_rule(tree, s);
  const int m = tree.players();

  // Walk the chain to the first node where someone stops.
  int i = tree.root();
  for (;;) {
    ExerciseSet stoppers;
    for (int k = 0; k < m; ++k)
      if (s.stop[k][i]) stoppers.add(k);
    if (tree.is_leaf(i)) return tree.node(i).x;
    if (!stoppers.empty()) {
      // Horizon payoffs stand in for the continuation value.
      int leaf = i;
      while (!tree.is_leaf(leaf)) leaf = tree.node(leaf).children.front().node;
      return project_hyperplane(tree.node(leaf).x, stoppers, tree.node(i).x, w);
    }
    i = tree.node(i).children.front().node;
  }
}

EventTree chain_tree(int players, const std::vector<std::vector<double>>& rows,
                     double tolerance) {
  if (rows.empty()) throw std::invalid_argument("chain needs at least one row");
  std::vector<TreeNode> nodes(rows.size());
  for (size_t t = 0; t < rows.size(); ++t) {
    nodes[t].time = static_cast<int>(t);
    nodes[t].x = rows[t];
    if (t + 1 < rows.size())
      nodes[t].children = {TreeChild{static_cast<int>(t) + 1, 1.0}};
  }
  return EventTree(players, std::move(nodes), 0, {}, tolerance);
}

}  // namespace dynkin
