#include "dynkin/solver.hpp"

#include <algorithm>
#include <cmath>

namespace dynkin {

SolveResult solve_single(const SinglePeriodGame& g) {
  OrthantProjection pr =
      project_orthant(g.terminal_payoff, OrthantSpec{g.exercise_payoff}, g.weights);
  return {std::move(pr.point), StrategyProfile(g.players(), pr.active), pr.active};
}

void ScenarioSet::validate(int m, double tolerance) const {
  if (scenarios.empty())
    throw std::invalid_argument("scenario set must not be empty");
  double total = 0.0;
  for (const Scenario& sc : scenarios) {
    if (!std::isfinite(sc.probability) || sc.probability < 0.0)
      throw std::invalid_argument("scenario probabilities must be nonnegative");
    if (static_cast<int>(sc.exercise_payoff.size()) != m ||
        static_cast<int>(sc.terminal_payoff.size()) != m)
      throw std::invalid_argument("scenario payoff vectors must have one entry per player");
    total += sc.probability;
  }
  if (std::abs(total - 1.0) > tolerance)
    throw std::invalid_argument("scenario probabilities must sum to 1");
}

SolveResult solve_single_stochastic(const ScenarioSet& sc, const WeightSystem& w) {
  const int m = w.players();
  sc.validate(m, w.tolerance());
  std::vector<double> x(m, 0.0), p(m, 0.0);
  for (const Scenario& s : sc.scenarios) {
    for (int k = 0; k < m; ++k) {
      x[k] += s.probability * s.exercise_payoff[k];
      p[k] += s.probability * s.terminal_payoff[k];
    }
  }
  return solve_single(SinglePeriodGame(w, std::move(x), std::move(p)));
}

QuittingGame::QuittingGame(WeightSystem w, std::vector<std::vector<double>> rows)
    : weights(std::move(w)), x(std::move(rows)) {
  if (x.size() < 2)
    throw std::invalid_argument("quitting game needs horizon >= 1");
  for (const auto& row : x)
    if (static_cast<int>(row.size()) != weights.players())
      throw std::invalid_argument("payoff rows must have one entry per player");
}

PayoffVector quitting_payoff(const QuittingGame& q, const QuittingProfile& s) {
  const int m = q.players();
  const int horizon = q.horizon();
  if (static_cast<int>(s.times.size()) != m)
    throw std::invalid_argument("profile must have one time per player");
  ExerciseSet early;
  for (int k = 0; k < m; ++k) {
    if (s.times[k] < 0 || s.times[k] > horizon)
      throw std::invalid_argument("exercise times must lie in [0, T]");
    if (s.times[k] < horizon) early.add(k);
  }
  const std::vector<double>& terminal = q.x[horizon];
  PayoffVector v = terminal;
  if (early.empty()) return v;
  double d = 0.0;
  for (int i = 0; i < m; ++i)
    if (early.contains(i)) d += q.x[s.times[i]][i] - terminal[i];
  for (int k = 0; k < m; ++k) {
    if (early.contains(k))
      v[k] = q.x[s.times[k]][k];
    else if (!early.is_full(m))
      v[k] = terminal[k] - weight(q.weights, early, k) * d;
  }
  return v;
}

QuittingSolveResult solve_quitting(const QuittingGame& q) {
  const int m = q.players();
  const int horizon = q.horizon();
  const double tol = q.weights.tolerance();

  std::vector<double> running_max = q.x[0];
  for (int t = 1; t < horizon; ++t)
    for (int k = 0; k < m; ++k)
      running_max[k] = std::max(running_max[k], q.x[t][k]);

  OrthantProjection pr =
      project_orthant(q.x[horizon], OrthantSpec{running_max}, q.weights);

  QuittingProfile eq{std::vector<int>(m, horizon)};
  for (int k = 0; k < m; ++k) {
    for (int t = 0; t <= horizon; ++t) {
      if (t == horizon || pr.point[k] <= q.x[t][k] + tol) {
        eq.times[k] = t;
        break;
      }
    }
  }
  return {std::move(pr.point), std::move(eq), pr.active};
}

// ---------------------------------------------------------------------------
// Subgame-perfect policy

struct SubgamePerfectPolicy::Reduced {
  std::vector<int> players;  // original indices of still-active players
  QuittingGame game;
};

SubgamePerfectPolicy::SubgamePerfectPolicy(QuittingGame game) : game_(std::move(game)) {
  if (game_.players() > 10 || game_.horizon() > 10)
    throw InstanceTooLarge("subgame-perfect policy is limited to m <= 10, T <= 10");
}

// Departures lock in an adjustment to the horizon payoffs of everyone still
// playing; the remaining game is again a quitting game with rescaled
// generators (the subgame structure of the single-period model carries over).
SubgamePerfectPolicy::Reduced SubgamePerfectPolicy::reduce(
    int t, const std::vector<int>& departed) const {
  const int m = game_.players();
  const int horizon = game_.horizon();
  ExerciseSet gone;
  for (int k = 0; k < m; ++k) {
    if (departed[k] == kStillIn) continue;
    if (departed[k] < 0 || departed[k] >= t)
      throw std::invalid_argument("departed players must have exercised before t");
    gone.add(k);
  }
  if (gone.is_full(m))
    throw std::invalid_argument("state needs at least one active player");

  const std::vector<double>& terminal = game_.x[horizon];
  double d = 0.0;
  for (int i = 0; i < m; ++i)
    if (gone.contains(i)) d += game_.x[departed[i]][i] - terminal[i];

  std::vector<int> active = remaining_players(gone, m);
  std::vector<double> a;
  for (int k : active)
    a.push_back(gone.empty() ? game_.weights.generator(k)
                             : weight(game_.weights, gone, k));

  std::vector<std::vector<double>> rows;
  for (int u = t; u <= horizon; ++u) {
    std::vector<double> row;
    for (int k : active) {
      double value = game_.x[u][k];
      if (u == horizon && !gone.empty())
        value -= weight(game_.weights, gone, k) * d;
      row.push_back(value);
    }
    rows.push_back(std::move(row));
  }
  return {std::move(active),
          QuittingGame(WeightSystem(std::move(a), game_.weights.tolerance()),
                       std::move(rows))};
}

std::vector<bool> SubgamePerfectPolicy::actions(int t,
                                                const std::vector<int>& departed) const {
  const int m = game_.players();
  if (static_cast<int>(departed.size()) != m)
    throw std::invalid_argument("state must list one entry per player");
  if (t < 0 || t > game_.horizon())
    throw std::invalid_argument("time out of range");
  std::vector<bool> out(m, false);
  if (t == game_.horizon()) return out;  // the game ends on its own

  const auto key = std::make_pair(t, departed);
  if (auto it = memo_.find(key); it != memo_.end()) {
    for (int k = 0; k < m; ++k) out[k] = it->second[k];
    return out;
  }

  Reduced r = reduce(t, departed);
  QuittingSolveResult sub = solve_quitting(r.game);
  const double tol = game_.weights.tolerance();
  for (size_t j = 0; j < r.players.size(); ++j)
    out[r.players[j]] = sub.value[j] <= r.game.x[0][j] + tol;
  memo_.emplace(key, out);
  return out;
}

PayoffVector SubgamePerfectPolicy::state_value(int t,
                                               const std::vector<int>& departed) const {
  const int m = game_.players();
  const int horizon = game_.horizon();
  if (static_cast<int>(departed.size()) != m)
    throw std::invalid_argument("state must list one entry per player");
  if (t < 0 || t > horizon) throw std::invalid_argument("time out of range");

  PayoffVector v(m, 0.0);
  for (int k = 0; k < m; ++k)
    if (departed[k] != kStillIn) v[k] = game_.x[departed[k]][k];
  if (t == horizon) {
    // No choices left: active players collect the adjusted horizon payoff.
    // reduce() cannot build a one-row game, so evaluate via quitting_payoff
    // with the departures as the profile.
    QuittingProfile s{std::vector<int>(m, horizon)};
    for (int k = 0; k < m; ++k)
      if (departed[k] != kStillIn) s.times[k] = departed[k];
    PayoffVector full = quitting_payoff(game_, s);
    for (int k = 0; k < m; ++k)
      if (departed[k] == kStillIn) v[k] = full[k];
    return v;
  }
  Reduced r = reduce(t, departed);
  QuittingSolveResult sub = solve_quitting(r.game);
  for (size_t j = 0; j < r.players.size(); ++j) v[r.players[j]] = sub.value[j];
  return v;
}

QuittingProfile SubgamePerfectPolicy::on_path_profile() const {
  const int m = game_.players();
  const int horizon = game_.horizon();
  std::vector<int> departed(m, kStillIn);
  for (int t = 0; t < horizon; ++t) {
    bool anyone_active = false;
    for (int k = 0; k < m; ++k) anyone_active |= departed[k] == kStillIn;
    if (!anyone_active) break;
    std::vector<bool> act = actions(t, departed);
    for (int k = 0; k < m; ++k)
      if (act[k]) departed[k] = t;
  }
  QuittingProfile s{std::vector<int>(m, horizon)};
  for (int k = 0; k < m; ++k)
    if (departed[k] != kStillIn) s.times[k] = departed[k];
  return s;
}

}  // namespace dynkin
