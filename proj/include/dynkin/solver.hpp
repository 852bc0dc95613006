// Value and optimal-equilibrium computation: single-period games
// (deterministic and scenario-based stochastic), quitting games, and the
// perfect-information subgame-perfect quitting policy.
#pragma once

#include <map>
#include <vector>

#include "dynkin/game.hpp"
#include "dynkin/projection.hpp"

namespace dynkin {

struct SolveResult {
  PayoffVector value;
  StrategyProfile equilibrium;
  ExerciseSet active_set;
};

// Value = projection of the terminal payoffs onto the exercise orthant; the
// equilibrium exercises exactly the active set.
SolveResult solve_single(const SinglePeriodGame& g);

struct Scenario {
  double probability = 0.0;
  std::vector<double> exercise_payoff;
  std::vector<double> terminal_payoff;
};

struct ScenarioSet {
  std::vector<Scenario> scenarios;

  // Throws unless probabilities are nonnegative and sum to 1 and all payoff
  // vectors have m entries.
  void validate(int m, double tolerance) const;
};

// Exercise decisions are made before the scenario is revealed, so only the
// expectations matter: reduce to the deterministic game on E[X], E[P].
SolveResult solve_single_stochastic(const ScenarioSet& sc, const WeightSystem& w);

// Quitting game: exercising removes a player (payoff X_{k,t}) but the game
// runs on for everyone else until the horizon.
struct QuittingGame {
  QuittingGame(WeightSystem weights, std::vector<std::vector<double>> x_rows);

  int players() const { return weights.players(); }
  int horizon() const { return static_cast<int>(x.size()) - 1; }

  WeightSystem weights;
  std::vector<std::vector<double>> x;  // x[t][k], t = 0..T
};

struct QuittingProfile {
  std::vector<int> times;  // times[k] in [0, T]; T means no early exercise
};

PayoffVector quitting_payoff(const QuittingGame& q, const QuittingProfile& s);

struct QuittingSolveResult {
  PayoffVector value;
  QuittingProfile equilibrium;
  ExerciseSet active_set;  // players exercising before the horizon
};

// Reduce to a single-period game: exercise payoffs are the running maxima
// over [0, T-1], terminal payoffs the horizon row. Each player's equilibrium
// time is the first t at which the value dips to X_{k,t} (within tolerance).
QuittingSolveResult solve_quitting(const QuittingGame& q);

// Perfect-information subgame-perfect policy. A state is a time together
// with the exercise times of already-departed players; the action at a state
// re-solves the remaining quitting game with the departures folded into the
// terminal payoffs and weights. Guarded to m <= 10 and T <= 10.
class SubgamePerfectPolicy {
 public:
  explicit SubgamePerfectPolicy(QuittingGame game);

  static constexpr int kStillIn = -1;

  // departed[k] = exercise time < t, or kStillIn. Returns, for each player,
  // true if the policy exercises at time t (false for departed players and
  // at t = T, where the game ends by itself).
  std::vector<bool> actions(int t, const std::vector<int>& departed) const;

  // Value of the state for the remaining players (departed players keep
  // their locked-in exercise payoff).
  PayoffVector state_value(int t, const std::vector<int>& departed) const;

  // Follow the policy from the empty history.
  QuittingProfile on_path_profile() const;

  const QuittingGame& game() const { return game_; }

 private:
  struct Reduced;
  Reduced reduce(int t, const std::vector<int>& departed) const;

  QuittingGame game_;
  mutable std::map<std::pair<int, std::vector<int>>, std::vector<bool>> memo_;
};

}  // namespace dynkin
