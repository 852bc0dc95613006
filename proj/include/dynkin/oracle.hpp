// Ground-truth verification by exhaustive enumeration: payoff tables, Nash
// and optimal-equilibrium lists, maximin/minimax, WUC checking and the
// canonical-form weight fit. Raw weight tables bypass the WeightSystem
// invariants so the boundary counterexamples can be reproduced.
//
// Enumeration kernels run serially or under OpenMP (Exec::Parallel); both
// paths must produce identical reports.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dynkin/event_tree.hpp"
#include "dynkin/game.hpp"
#include "dynkin/projection.hpp"
#include "dynkin/solver.hpp"

namespace dynkin {

// Arbitrary weights w_k(E), defined for every nonempty proper subset E and
// k outside E. No positivity or canonical-form constraints.
class RawWeightTable {
 public:
  explicit RawWeightTable(int players);

  // Expand w_k(E) = a_k / (1 - sum over E) without the sum-at-most-1
  // constraint; only vanishing denominators are rejected.
  static RawWeightTable from_generators(const std::vector<double>& a);

  int players() const { return m_; }
  void set(ExerciseSet e, int k, double value);
  double get(ExerciseSet e, int k) const;
  bool complete() const;

 private:
  std::size_t index(ExerciseSet e, int k) const;

  int m_;
  std::vector<double> w_;
};

// A single-period game with precomputed weight and difference tables, the
// form the enumeration kernels consume. Built from a proper game or from a
// raw table. Guarded at m <= 15.
class OracleGame {
 public:
  explicit OracleGame(const SinglePeriodGame& g);
  OracleGame(const RawWeightTable& table, std::vector<double> exercise_payoff,
             std::vector<double> terminal_payoff,
             double tolerance = kDefaultTolerance);

  int players() const { return m_; }
  double tolerance() const { return tol_; }
  const std::vector<double>& exercise_payoff() const { return x_; }
  const std::vector<double>& terminal_payoff() const { return p_; }

  // Payoff of player k when exactly the players in mask exercise.
  double payoff(std::uint64_t mask, int k) const {
    if ((mask >> k) & 1u) return x_[k];
    if (mask == 0) return p_[k];
    if (mask == full_) return x_[k];
    return p_[k] - w_[mask * m_ + k] * d_[mask];
  }

 private:
  void build_tables(const std::function<double(std::uint64_t, int)>& weight_of);

  int m_;
  std::uint64_t full_;
  std::vector<double> x_, p_;
  double tol_;
  std::vector<double> w_;  // (1 << m) * m
  std::vector<double> d_;  // 1 << m
};

// Equilibrium analysis of a finite game in normal form. Profiles are mixed-
// radix encoded: player 0 is the least significant digit.
struct EquilibriumReport {
  int players = 0;
  std::vector<int> strategy_counts;
  std::uint64_t profile_count = 0;
  std::vector<double> payoffs;  // profile_count x players, row-major
  std::vector<std::uint64_t> nash;     // ascending profile ids
  std::vector<std::uint64_t> optimal;  // subset of nash, ascending
  std::vector<double> maximin;
  std::vector<double> minimax;

  double payoff(std::uint64_t id, int k) const { return payoffs[id * players + k]; }
  std::vector<double> payoff_row(std::uint64_t id) const;
  std::vector<int> decode(std::uint64_t id) const;
  std::uint64_t encode(const std::vector<int>& strategies) const;
  bool is_optimal(std::uint64_t id) const;

  // Number of payoff vectors among the given profiles that differ by more
  // than tol in some coordinate.
  int distinct_payoff_count(const std::vector<std::uint64_t>& ids, double tol) const;
};

// Generic brute-force analysis; the payoff callback must be pure and
// thread-safe. The profile count (product of strategy counts) is guarded at
// 2^20 profiles.
EquilibriumReport analyze_normal_form(
    const std::vector<int>& strategy_counts,
    const std::function<void(const std::vector<int>&, std::vector<double>&)>& payoff_fn,
    double tolerance, Exec exec = Exec::Parallel);

// All 2^m exercise profiles of a single-period game (profile id = exerciser
// bitmask).
EquilibriumReport analyze_single(const OracleGame& g, Exec exec = Exec::Parallel);
EquilibriumReport analyze_single(const SinglePeriodGame& g, Exec exec = Exec::Parallel);

struct WucWitness {
  int deviator = 0;
  int affected = 0;
  std::uint64_t profile = 0;       // deviator exercises here
  std::uint64_t profile_alt = 0;   // and waits here; others unchanged
};

// Checks both implications of weak unilateral competitiveness over every
// (deviator, bystander, profile) triple. Empty result means the game is WUC.
// Guarded at m <= 10.
std::optional<WucWitness> check_wuc(const OracleGame& g);
std::optional<WucWitness> check_wuc(const SinglePeriodGame& g);

// Decides whether a complete raw table is of the canonical generator form
// and returns the generators if so. The generators may sum above 1 (that
// constraint belongs to WeightSystem, not to the form itself).
std::optional<std::vector<double>> check_weight_form(const RawWeightTable& table,
                                                     double tolerance = kDefaultTolerance);

// Seeded random search for payoffs making a raw-weight game non-WUC.
struct WucSearchResult {
  std::vector<double> exercise_payoff;
  std::vector<double> terminal_payoff;
  WucWitness witness;
};
std::optional<WucSearchResult> search_wuc_violation(const RawWeightTable& table,
                                                    std::uint64_t seed,
                                                    int attempts = 200,
                                                    double tolerance = kDefaultTolerance);

// Exhaustive saddle check of a stopping rule on an event tree: own
// deviations cannot improve the deviator, joint opponent deviations cannot
// push a player below the candidate payoff. Strategies range over all
// adapted rules (one stop bit per internal node). Guarded at m <= 3 and at
// most 8 internal nodes.
bool verify_stopping_equilibrium(const EventTree& tree, const WeightSystem& w,
                                 const StoppingRule& candidate, const ValueProcess& u,
                                 Exec exec = Exec::Parallel);

// Equilibrium report of the natural variant on a chain, over all (T+1)^m
// exercise-time profiles.
EquilibriumReport analyze_natural_chain(const EventTree& tree, const WeightSystem& w,
                                        Exec exec = Exec::Parallel);

// Equilibrium report of a deterministic quitting game over all (T+1)^m
// exercise-time profiles. Guarded at 2^20 profiles.
EquilibriumReport verify_quitting(const QuittingGame& q, Exec exec = Exec::Parallel);

// Quitting game whose payoff paths depend on a scenario revealed at time 1.
// Time-0 rows must agree across scenarios. A pure strategy either exercises
// at 0 or maps each scenario to an exercise time in [1, T].
struct StochasticQuittingGame {
  StochasticQuittingGame(WeightSystem weights, std::vector<double> probabilities,
                         std::vector<std::vector<std::vector<double>>> scenario_rows);

  int players() const { return weights.players(); }
  int horizon() const { return static_cast<int>(scenario_rows[0].size()) - 1; }
  int scenario_count() const { return static_cast<int>(probabilities.size()); }

  WeightSystem weights;
  std::vector<double> probabilities;
  std::vector<std::vector<std::vector<double>>> scenario_rows;  // [scenario][t][k]
};

EquilibriumReport analyze_quitting_stochastic(const StochasticQuittingGame& q,
                                              Exec exec = Exec::Parallel);

}  // namespace dynkin
