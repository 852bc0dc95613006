#include "dynkin/event_tree.hpp"

#include "doctest.h"
#include "dynkin/oracle.hpp"
#include "dynkin/solver.hpp"
#include "random_games.hpp"

using namespace dynkin;

namespace {

// Root at time 0 with two children; X given per node.
EventTree fork_tree(int m, std::vector<double> root_x, std::vector<double> left_x,
                    std::vector<double> right_x, double p_left) {
  std::vector<TreeNode> nodes(3);
  nodes[0].time = 0;
  nodes[0].x = std::move(root_x);
  nodes[0].children = {TreeChild{1, p_left}, TreeChild{2, 1.0 - p_left}};
  nodes[1].time = 1;
  nodes[1].x = std::move(left_x);
  nodes[2].time = 1;
  nodes[2].x = std::move(right_x);
  return EventTree(m, std::move(nodes), 0);
}

}  // namespace

TEST_CASE("event tree validation") {
  std::vector<TreeNode> nodes(2);
  nodes[0].time = 0;
  nodes[0].x = {1.0};
  nodes[0].children = {TreeChild{1, 0.5}};
  nodes[1].time = 1;
  nodes[1].x = {2.0};
  // Probabilities must sum to one.
  CHECK_THROWS_AS(EventTree(1, nodes, 0), std::invalid_argument);
  nodes[0].children[0].probability = 1.0;
  CHECK_NOTHROW(EventTree(1, nodes, 0));

  // Child must sit one period later.
  nodes[1].time = 2;
  CHECK_THROWS_AS(EventTree(1, nodes, 0), std::invalid_argument);
  nodes[1].time = 1;

  // Unreachable nodes are rejected.
  std::vector<TreeNode> orphan(3);
  orphan[0].time = 0;
  orphan[0].x = {1.0};
  orphan[0].children = {TreeChild{1, 1.0}};
  orphan[1].time = 1;
  orphan[1].x = {2.0};
  orphan[2].time = 1;
  orphan[2].x = {3.0};
  CHECK_THROWS_AS(EventTree(1, orphan, 0), std::invalid_argument);

  // Interior leaves are rejected.
  std::vector<TreeNode> stub(3);
  stub[0].time = 0;
  stub[0].x = {1.0};
  stub[0].children = {TreeChild{1, 1.0}};
  stub[1].time = 1;
  stub[1].x = {2.0};
  stub[1].children = {TreeChild{2, 1.0}};
  stub[2].time = 2;
  stub[2].x = {3.0};
  CHECK_NOTHROW(EventTree(1, stub, 0));
  stub[1].children.clear();  // node 2 unreachable AND node 1 an early leaf
  CHECK_THROWS_AS(EventTree(1, stub, 0), std::invalid_argument);
}

TEST_CASE("value process") {
  SUBCASE("single-node tree") {
    std::vector<TreeNode> nodes(1);
    nodes[0].time = 0;
    nodes[0].x = {3.0, -1.0};
    EventTree tree(2, std::move(nodes), 0);
    ValueProcess u = value_process(tree, WeightSystem({0.25, 0.25}));
    CHECK(u[0] == std::vector<double>{3.0, -1.0});
  }
  SUBCASE("worked two-period chain") {
    EventTree tree = chain_tree(2, {{1, 5}, {2, 3}});
    ValueProcess u = value_process(tree, WeightSystem({0.25, 0.25}));
    CHECK(u[1] == std::vector<double>{2, 3});
    CHECK(u[0][0] == doctest::Approx(4.0 / 3).epsilon(1e-12));
    CHECK(u[0][1] == 5.0);
  }
  SUBCASE("interior trees propagate plain expectations") {
    EventTree tree = fork_tree(2, {-100, -100}, {4, 6}, {2, 10}, 0.25);
    ValueProcess u = value_process(tree, WeightSystem({0.3, 0.3}));
    CHECK(u[0][0] == doctest::Approx(0.25 * 4 + 0.75 * 2).epsilon(1e-12));
    CHECK(u[0][1] == doctest::Approx(0.25 * 6 + 0.75 * 10).epsilon(1e-12));
  }
}

TEST_CASE("value process invariants") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 3);
    EventTree tree = testgen::random_tree(rng, m, 1 + static_cast<int>(rng() % 3));
    WeightSystem w(testgen::random_generators(rng, m, trial % 2 ? 1.0 : 0.6));
    ValueProcess u = value_process(tree, w);
    for (int i = 0; i < tree.node_count(); ++i) {
      // Feasibility at every node.
      for (int k = 0; k < m; ++k) CHECK(u[i][k] >= tree.node(i).x[k] - 1e-9);
      // Martingale property away from the exercise boundary.
      if (tree.is_leaf(i)) continue;
      bool touching = false;
      for (int k = 0; k < m; ++k)
        touching = touching || u[i][k] <= tree.node(i).x[k] + 1e-9;
      if (!touching) {
        std::vector<double> expected(m, 0.0);
        for (const TreeChild& c : tree.node(i).children)
          for (int k = 0; k < m; ++k) expected[k] += c.probability * u[c.node][k];
        CHECK(u[i] == expected);
      }
    }
  }
}

TEST_CASE("stopping equilibrium and profile evaluation") {
  EventTree tree = chain_tree(2, {{1, 5}, {2, 3}});
  WeightSystem w({0.25, 0.25});
  ValueProcess u = value_process(tree, w);
  StoppingRule rule = equilibrium_stopping(tree, u);

  // Player 2 stops immediately, player 1 only at the horizon.
  CHECK_FALSE(rule.stop[0][0]);
  CHECK(rule.stop[0][1]);
  CHECK(rule.stop[1][0]);
  CHECK(rule.stop[1][1]);

  SUBCASE("equilibrium replays the root value") {
    PayoffVector v = evaluate_stopping_profile(tree, w, rule, u);
    CHECK(v[0] == doctest::Approx(u[0][0]).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(u[0][1]).epsilon(1e-12));
  }
  SUBCASE("everyone stopping at the root pays the root payoffs") {
    StoppingRule all;
    all.stop.assign(2, std::vector<std::uint8_t>(tree.node_count(), 1));
    CHECK(evaluate_stopping_profile(tree, w, all, u) == std::vector<double>{1, 5});
  }
  SUBCASE("leaves must stop") {
    StoppingRule bad = rule;
    bad.stop[0][1] = 0;
    CHECK_THROWS_AS(evaluate_stopping_profile(tree, w, bad, u), std::invalid_argument);
  }
}

TEST_CASE("equilibrium replays the root value on random trees") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 3);
    EventTree tree = testgen::random_tree(rng, m, 1 + static_cast<int>(rng() % 3));
    WeightSystem w(testgen::random_generators(rng, m, trial % 2 ? 1.0 : 0.6));
    ValueProcess u = value_process(tree, w);
    StoppingRule rule = equilibrium_stopping(tree, u);
    PayoffVector v = evaluate_stopping_profile(tree, w, rule, u);
    for (int k = 0; k < m; ++k)
      CHECK(v[k] == doctest::Approx(u[tree.root()][k]).epsilon(1e-9));
  }
}

TEST_CASE("one-period chains reduce to the single-period game") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 4);
    WeightSystem w(testgen::random_generators(rng, m, trial % 2 ? 1.0 : 0.5));
    const auto x0 = testgen::random_payoffs(rng, m);
    const auto x1 = testgen::random_payoffs(rng, m);
    EventTree tree = chain_tree(m, {x0, x1});
    ValueProcess u = value_process(tree, w);
    SolveResult direct = solve_single(SinglePeriodGame(w, x0, x1));
    CHECK(u[tree.root()] == direct.value);
  }
}

TEST_CASE("natural variant") {
  WeightSystem w({1.0 / 3, 1.0 / 3, 1.0 / 3});
  EventTree tree = chain_tree(3, {{-1, -1, 0}, {-2, -2, 4}, {0, 0, 0}});

  SUBCASE("everyone waiting pays the horizon row") {
    StoppingRule rule;
    rule.stop.assign(3, std::vector<std::uint8_t>(3, 0));
    for (int k = 0; k < 3; ++k) rule.stop[k][2] = 1;
    CHECK(evaluate_natural_variant(tree, w, rule) == std::vector<double>{0, 0, 0});
  }
  SUBCASE("a single early stopper shifts everyone by the horizon difference") {
    StoppingRule rule;
    rule.stop.assign(3, std::vector<std::uint8_t>(3, 0));
    for (int k = 0; k < 3; ++k) rule.stop[k][2] = 1;
    rule.stop[2][1] = 1;  // player 3 exercises at time 1
    PayoffVector v = evaluate_natural_variant(tree, w, rule);
    CHECK(v[2] == 4.0);
    // X_{k,T} - w_k({3}) (X_{3,1} - X_{3,T}) = 0 - 0.5 * 4
    CHECK(v[0] == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(-2.0).epsilon(1e-12));
  }
  SUBCASE("non-chains are rejected") {
    EventTree fork = fork_tree(2, {0, 0}, {1, 1}, {2, 2}, 0.5);
    StoppingRule rule;
    rule.stop.assign(2, std::vector<std::uint8_t>(3, 1));
    CHECK_THROWS_AS(evaluate_natural_variant(fork, WeightSystem({0.25, 0.25}), rule),
                    std::invalid_argument);
  }
}
