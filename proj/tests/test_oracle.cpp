#include "dynkin/oracle.hpp"

#include <algorithm>

#include "doctest.h"
#include "dynkin/solver.hpp"
#include "random_games.hpp"

using namespace dynkin;

namespace {

// Raw two-player table with w_1({2}) = w_2({1}) = 1.5; these are the weights
// generated by a = [0.6, 0.6], which no WeightSystem admits.
RawWeightTable oversaturated_table() {
  RawWeightTable t(2);
  t.set(ExerciseSet(0b10), 0, 1.5);
  t.set(ExerciseSet(0b01), 1, 1.5);
  return t;
}

}  // namespace

TEST_CASE("no pure equilibrium beyond the generator-sum boundary") {
  OracleGame g(oversaturated_table(), {0, 0}, {1, -1});
  EquilibriumReport rep = analyze_single(g);
  CHECK(rep.nash.empty());
  CHECK(rep.optimal.empty());

  // Hand-derived payoff table, exact: profile ids are exerciser bitmasks.
  CHECK(rep.payoff_row(0b00) == std::vector<double>{1, -1});
  CHECK(rep.payoff_row(0b01) == std::vector<double>{0, 0.5});
  CHECK(rep.payoff_row(0b10) == std::vector<double>{-0.5, 0});
  CHECK(rep.payoff_row(0b11) == std::vector<double>{0, 0});

  CHECK(rep.maximin[0] == 0.0);
  CHECK(rep.minimax[0] == 0.0);
}

TEST_CASE("oracle agrees with the solver on random games") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 6);
    SinglePeriodGame g = testgen::random_single(rng, m, trial % 2 ? 1.0 : 0.5);
    SolveResult solved = solve_single(g);
    EquilibriumReport rep = analyze_single(g);
    REQUIRE(!rep.nash.empty());
    CHECK(rep.is_optimal(solved.active_set.bits()));
    for (int k = 0; k < m; ++k) {
      CHECK(rep.maximin[k] <= rep.minimax[k]);
      CHECK(solved.value[k] == doctest::Approx(rep.maximin[k]).epsilon(1e-9));
      CHECK(solved.value[k] == doctest::Approx(rep.minimax[k]).epsilon(1e-9));
    }
    // WUC collapses Nash and optimal equilibria onto the single value point.
    CHECK(rep.nash == rep.optimal);
    CHECK(rep.distinct_payoff_count(rep.nash, 1e-9) == 1);
    // The difference due to exercise is nonnegative at every equilibrium.
    for (std::uint64_t id : rep.nash)
      CHECK(exercise_difference(g, ExerciseSet(id)) >= -1e-9);
  }
}

TEST_CASE("parallel enumeration matches the serial reference") {
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 6; ++trial) {
    SinglePeriodGame g = testgen::random_single(rng, 8, trial % 2 ? 1.0 : 0.5);
    EquilibriumReport serial = analyze_single(g, Exec::Serial);
    EquilibriumReport parallel = analyze_single(g, Exec::Parallel);
    CHECK(serial.payoffs == parallel.payoffs);  // bit-identical
    CHECK(serial.nash == parallel.nash);
    CHECK(serial.optimal == parallel.optimal);
    CHECK(serial.maximin == parallel.maximin);
    CHECK(serial.minimax == parallel.minimax);
  }
  QuittingGame q = testgen::random_quitting(rng, 3, 3, 1.0);
  EquilibriumReport serial = verify_quitting(q, Exec::Serial);
  EquilibriumReport parallel = verify_quitting(q, Exec::Parallel);
  CHECK(serial.payoffs == parallel.payoffs);
  CHECK(serial.nash == parallel.nash);
  CHECK(serial.optimal == parallel.optimal);
}

TEST_CASE("analyze_single rejects oversized games") {
  WeightSystem w(std::vector<double>(16, 0.05));
  std::vector<double> zero(16, 0.0);
  CHECK_THROWS_AS(OracleGame(SinglePeriodGame(w, zero, zero)), InstanceTooLarge);
}

TEST_CASE("check_wuc") {
  SUBCASE("single player is vacuously competitive") {
    RawWeightTable t(1);
    OracleGame g(t, {1}, {2});
    CHECK_FALSE(check_wuc(g).has_value());
  }
  SUBCASE("two-player tables with positive weights are always WUC") {
    // The canonical-form fit fails here (1.5 * 2 != 1 has no generator
    // solution), yet with only two players the game stays WUC: the growth
    // condition on weights is vacuous below three players.
    RawWeightTable t(2);
    t.set(ExerciseSet(0b10), 0, 2.0);
    t.set(ExerciseSet(0b01), 1, 0.5);
    CHECK_FALSE(check_weight_form(t).has_value());
    std::mt19937_64 rng(97);
    for (int trial = 0; trial < 20; ++trial) {
      OracleGame g(t, testgen::random_payoffs(rng, 2), testgen::random_payoffs(rng, 2));
      CHECK_FALSE(check_wuc(g).has_value());
    }
  }
  SUBCASE("a broken growth condition is falsified by payoff search") {
    // Start from a valid three-player table and bend one pair entry.
    RawWeightTable t = RawWeightTable::from_generators({0.25, 0.25, 0.25});
    t.set(ExerciseSet(0b110), 0, t.get(ExerciseSet(0b110), 0) * 1.3);
    CHECK_FALSE(check_weight_form(t).has_value());
    auto found = search_wuc_violation(t, 12345);
    REQUIRE(found.has_value());
    // The witness really violates the definition.
    OracleGame g(t, found->exercise_payoff, found->terminal_payoff);
    auto witness = check_wuc(g);
    REQUIRE(witness.has_value());
    const double dk = g.payoff(witness->profile, witness->deviator) -
                      g.payoff(witness->profile_alt, witness->deviator);
    const double dl = g.payoff(witness->profile, witness->affected) -
                      g.payoff(witness->profile_alt, witness->affected);
    const bool same_sign_move = (dk > 1e-9 && dl > 1e-9) || (dk < -1e-9 && dl < -1e-9);
    const bool broken_equality = std::abs(dk) <= 1e-9 && std::abs(dl) > 1e-9;
    CHECK((same_sign_move || broken_equality));
  }
}

TEST_CASE("check_weight_form") {
  SUBCASE("round trip") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 40; ++trial) {
      const int m = 2 + static_cast<int>(rng() % 5);
      // Two-player saturated tables are all-ones and cannot identify a.
      const double sum = (m == 2 || trial % 2 == 0) ? 0.5 : 1.0;
      const std::vector<double> a = testgen::random_generators(rng, m, sum);
      auto fit = check_weight_form(RawWeightTable::from_generators(a));
      REQUIRE(fit.has_value());
      for (int k = 0; k < m; ++k)
        CHECK((*fit)[k] == doctest::Approx(a[k]).epsilon(1e-9));
    }
  }
  SUBCASE("the oversaturated pair still fits the form") {
    auto fit = check_weight_form(oversaturated_table());
    REQUIRE(fit.has_value());
    CHECK((*fit)[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK((*fit)[1] == doctest::Approx(0.6).epsilon(1e-12));
  }
  SUBCASE("degenerate singleton product has no fit") {
    RawWeightTable t(2);
    t.set(ExerciseSet(0b10), 0, 2.0);
    t.set(ExerciseSet(0b01), 1, 0.5);
    CHECK_FALSE(check_weight_form(t).has_value());
  }
  SUBCASE("negative entries have no fit") {
    RawWeightTable t = RawWeightTable::from_generators({0.25, 0.25, 0.25});
    t.set(ExerciseSet(0b100), 0, -0.5);
    CHECK_FALSE(check_weight_form(t).has_value());
  }
  SUBCASE("two-player saturated tables fit canonically") {
    auto fit = check_weight_form(RawWeightTable::from_generators({0.5, 0.5}));
    REQUIRE(fit.has_value());
    CHECK(*fit == std::vector<double>{0.5, 0.5});
  }
}

TEST_CASE("stopping equilibrium verification") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 12; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 3);
    EventTree tree = testgen::random_tree(rng, m, 1 + static_cast<int>(rng() % 2));
    WeightSystem w(testgen::random_generators(rng, m, trial % 2 ? 1.0 : 0.6));
    ValueProcess u = value_process(tree, w);
    StoppingRule rule = equilibrium_stopping(tree, u);
    CHECK(verify_stopping_equilibrium(tree, w, rule, u));
  }
  SUBCASE("stopping at the root of an interior game fails the check") {
    EventTree tree = chain_tree(2, {{-5, -5}, {1, 1}});
    WeightSystem w({0.25, 0.25});
    ValueProcess u = value_process(tree, w);
    StoppingRule all;
    all.stop.assign(2, std::vector<std::uint8_t>(tree.node_count(), 1));
    CHECK_FALSE(verify_stopping_equilibrium(tree, w, all, u));
  }
}

TEST_CASE("natural variant counterexample") {
  // Two payoff-distinct pure Nash outcomes and no optimal equilibrium.
  WeightSystem w({1.0 / 3, 1.0 / 3, 1.0 / 3});
  EventTree tree = chain_tree(3, {{-1, -1, 0}, {-2, -2, 4}, {0, 0, 0}});
  EquilibriumReport rep = analyze_natural_chain(tree, w);
  CHECK(rep.profile_count == 27);
  // Four profiles realize the two outcomes: the waiting player's unexecuted
  // time and the third player's entry are unobservable after the stop.
  CHECK(rep.nash.size() == 4);
  CHECK(rep.distinct_payoff_count(rep.nash, 1e-9) == 2);
  CHECK(rep.optimal.empty());
  bool saw_first = false, saw_second = false;
  for (std::uint64_t id : rep.nash) {
    const std::vector<double> v = rep.payoff_row(id);
    if (std::abs(v[0] + 1) < 1e-9 && std::abs(v[1] - 0.5) < 1e-9) saw_first = true;
    if (std::abs(v[0] - 0.5) < 1e-9 && std::abs(v[1] + 1) < 1e-9) saw_second = true;
    CHECK(v[2] == doctest::Approx(0.5).epsilon(1e-9));
  }
  CHECK(saw_first);
  CHECK(saw_second);
}

TEST_CASE("quitting verification") {
  SUBCASE("the solver equilibrium passes the saddle check") {
    QuittingGame q(WeightSystem({0.25, 0.25}), {{5, 0}, {3, 1}, {4, 2}});
    QuittingSolveResult r = solve_quitting(q);
    EquilibriumReport rep = verify_quitting(q);
    CHECK(rep.profile_count == 9);
    CHECK(rep.is_optimal(rep.encode(r.equilibrium.times)));
  }
  SUBCASE("all-wait is optimal in terminal-dominant games") {
    QuittingGame q(WeightSystem({0.25, 0.25}), {{-1, -2}, {-3, -1}, {0, 0}});
    EquilibriumReport rep = verify_quitting(q);
    CHECK(rep.is_optimal(rep.encode({2, 2})));
  }
  SUBCASE("random games: solver equilibrium always optimal") {
    std::mt19937_64 rng(107);
    for (int trial = 0; trial < 40; ++trial) {
      const int m = 1 + static_cast<int>(rng() % 4);
      const int horizon = 1 + static_cast<int>(rng() % 4);
      QuittingGame q = testgen::random_quitting(rng, m, horizon, trial % 2 ? 1.0 : 0.6);
      QuittingSolveResult r = solve_quitting(q);
      EquilibriumReport rep = verify_quitting(q);
      CHECK(rep.is_optimal(rep.encode(r.equilibrium.times)));
      for (int k = 0; k < m; ++k) {
        CHECK(r.value[k] == doctest::Approx(rep.maximin[k]).epsilon(1e-9));
        CHECK(r.value[k] == doctest::Approx(rep.minimax[k]).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("stochastic quitting counterexample has no pure equilibrium") {
  WeightSystem w({1.0 / 3, 1.0 / 3, 1.0 / 3});
  StochasticQuittingGame q(
      w, {0.5, 0.5},
      {{{2.1, 3.5, -50}, {-50, -50, -5.05}, {0, 5, -5}},
       {{2.1, 3.5, -50}, {4, -50, -50}, {0, 5, -5}}});
  EquilibriumReport rep = analyze_quitting_stochastic(q);
  CHECK(rep.profile_count == 125);
  CHECK(rep.nash.empty());
}
