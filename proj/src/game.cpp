#include "dynkin/game.hpp"

#include <cmath>

#include "dynkin/projection.hpp"

namespace dynkin {

WeightSystem::WeightSystem(std::vector<double> generators, double tolerance)
    : a_(std::move(generators)), tol_(tolerance) {
  if (a_.empty()) throw std::invalid_argument("weight system needs at least one player");
  if (static_cast<int>(a_.size()) > kMaxPlayers)
    throw std::invalid_argument("weight system supports at most 62 players");
  if (!(tol_ > 0.0) || !std::isfinite(tol_))
    throw std::invalid_argument("tolerance must be positive and finite");
  for (double x : a_) {
    if (!std::isfinite(x) || !(x > 0.0))
      throw std::invalid_argument("weight generators must be positive");
    sum_ += x;
  }
  if (sum_ > 1.0 + tol_)
    throw std::invalid_argument("weight generators must sum to at most 1");
  regime_ = std::abs(sum_ - 1.0) <= tol_ ? Regime::Saturated : Regime::Strict;
}

StrategyProfile StrategyProfile::from_decisions(const std::vector<int>& decisions) {
  const int m = static_cast<int>(decisions.size());
  if (m == 0 || m > kMaxPlayers)
    throw std::invalid_argument("strategy profile needs 1..62 players");
  ExerciseSet e;
  for (int k = 0; k < m; ++k) {
    if (decisions[k] != 0 && decisions[k] != 1)
      throw std::invalid_argument("strategy decisions must be 0 (exercise) or 1");
    if (decisions[k] == 0) e.add(k);
  }
  return StrategyProfile(m, e);
}

std::vector<int> StrategyProfile::decisions() const {
  std::vector<int> out(m_, 1);
  for (int k = 0; k < m_; ++k)
    if (exercisers_.contains(k)) out[k] = 0;
  return out;
}

SinglePeriodGame::SinglePeriodGame(WeightSystem w, std::vector<double> x,
                                   std::vector<double> p)
    : weights(std::move(w)),
      exercise_payoff(std::move(x)),
      terminal_payoff(std::move(p)) {
  const auto m = static_cast<size_t>(weights.players());
  if (exercise_payoff.size() != m || terminal_payoff.size() != m)
    throw std::invalid_argument("payoff vectors must match the player count");
  for (size_t i = 0; i < m; ++i)
    if (!std::isfinite(exercise_payoff[i]) || !std::isfinite(terminal_payoff[i]))
      throw std::invalid_argument("payoffs must be finite");
}

double weight(const WeightSystem& w, ExerciseSet e, int k) {
  const int m = w.players();
  if (k < 0 || k >= m) throw std::invalid_argument("player index out of range");
  if (e.contains(k)) throw std::invalid_argument("weight undefined for exercising players");
  if (e.is_full(m)) throw std::invalid_argument("weight undefined for the full exercise set");
  double denom = 1.0;
  for (int i = 0; i < m; ++i)
    if (e.contains(i)) denom -= w.generator(i);
  return w.generator(k) / denom;
}

double exercise_difference(const SinglePeriodGame& g, ExerciseSet e) {
  double d = 0.0;
  for (int i = 0; i < g.players(); ++i)
    if (e.contains(i)) d += g.exercise_payoff[i] - g.terminal_payoff[i];
  return d;
}

PayoffVector payoff(const SinglePeriodGame& g, ExerciseSet e) {
  return project_hyperplane(g.terminal_payoff, e, g.exercise_payoff, g.weights);
}

PayoffVector payoff(const SinglePeriodGame& g, const StrategyProfile& s) {
  if (s.players() != g.players())
    throw std::invalid_argument("profile size does not match the game");
  return payoff(g, s.exercisers());
}

std::vector<int> remaining_players(ExerciseSet e, int m) {
  std::vector<int> out;
  for (int k = 0; k < m; ++k)
    if (!e.contains(k)) out.push_back(k);
  return out;
}

SinglePeriodGame subgame(const SinglePeriodGame& g, ExerciseSet e) {
  const int m = g.players();
  if (e.empty() || e.is_full(m))
    throw std::invalid_argument("subgame requires a nonempty proper exercise set");
  const PayoffVector reduced_terminal = payoff(g, e);
  std::vector<double> a, x, p;
  for (int k : remaining_players(e, m)) {
    a.push_back(weight(g.weights, e, k));
    x.push_back(g.exercise_payoff[k]);
    p.push_back(reduced_terminal[k]);
  }
  return SinglePeriodGame(WeightSystem(std::move(a), g.weights.tolerance()),
                          std::move(x), std::move(p));
}

}  // namespace dynkin
