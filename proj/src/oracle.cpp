#include "dynkin/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>

namespace dynkin {

// ---------------------------------------------------------------------------
// RawWeightTable

RawWeightTable::RawWeightTable(int players) : m_(players) {
  if (m_ < 1 || m_ > 15)
    throw std::invalid_argument("raw weight tables are limited to 1..15 players");
  w_.assign((std::size_t{1} << m_) * m_, std::numeric_limits<double>::quiet_NaN());
}

std::size_t RawWeightTable::index(ExerciseSet e, int k) const {
  if (k < 0 || k >= m_) throw std::invalid_argument("player index out of range");
  if (e.contains(k)) throw std::invalid_argument("weights are defined for non-exercisers only");
  if (e.empty() || e.is_full(m_))
    throw std::invalid_argument("weights are defined for nonempty proper subsets only");
  return e.bits() * m_ + k;
}

void RawWeightTable::set(ExerciseSet e, int k, double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("weights must be finite");
  w_[index(e, k)] = value;
}

double RawWeightTable::get(ExerciseSet e, int k) const {
  const double v = w_[index(e, k)];
  if (std::isnan(v)) throw std::invalid_argument("weight table entry is unset");
  return v;
}

bool RawWeightTable::complete() const {
  const std::uint64_t full = (std::uint64_t{1} << m_) - 1;
  for (std::uint64_t mask = 1; mask < full; ++mask)
    for (int k = 0; k < m_; ++k)
      if (!((mask >> k) & 1u) && std::isnan(w_[mask * m_ + k])) return false;
  return true;
}

RawWeightTable RawWeightTable::from_generators(const std::vector<double>& a) {
  const int m = static_cast<int>(a.size());
  RawWeightTable t(m);
  for (double x : a)
    if (!std::isfinite(x)) throw std::invalid_argument("generators must be finite");
  const std::uint64_t full = (std::uint64_t{1} << m) - 1;
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    double denom = 1.0;
    for (int i = 0; i < m; ++i)
      if ((mask >> i) & 1u) denom -= a[i];
    if (std::abs(denom) < 1e-12)
      throw std::invalid_argument("generators produce a vanishing weight denominator");
    for (int k = 0; k < m; ++k)
      if (!((mask >> k) & 1u)) t.w_[mask * m + k] = a[k] / denom;
  }
  return t;
}

// ---------------------------------------------------------------------------
// OracleGame

void OracleGame::build_tables(const std::function<double(std::uint64_t, int)>& weight_of) {
  const std::uint64_t n = std::uint64_t{1} << m_;
  w_.assign(n * m_, 0.0);
  d_.assign(n, 0.0);
  for (std::uint64_t mask = 1; mask < n; ++mask) {
    double d = 0.0;
    for (int i = 0; i < m_; ++i)
      if ((mask >> i) & 1u) d += x_[i] - p_[i];
    d_[mask] = d;
    if (mask == full_) continue;
    for (int k = 0; k < m_; ++k)
      if (!((mask >> k) & 1u)) w_[mask * m_ + k] = weight_of(mask, k);
  }
}

OracleGame::OracleGame(const SinglePeriodGame& g)
    : m_(g.players()),
      full_((std::uint64_t{1} << g.players()) - 1),
      x_(g.exercise_payoff),
      p_(g.terminal_payoff),
      tol_(g.weights.tolerance()) {
  if (m_ > 15) throw InstanceTooLarge("oracle games are limited to 15 players");
  build_tables([&g](std::uint64_t mask, int k) {
    return weight(g.weights, ExerciseSet(mask), k);
  });
}

OracleGame::OracleGame(const RawWeightTable& table, std::vector<double> x,
                       std::vector<double> p, double tolerance)
    : m_(table.players()),
      full_((std::uint64_t{1} << table.players()) - 1),
      x_(std::move(x)),
      p_(std::move(p)),
      tol_(tolerance) {
  if (static_cast<int>(x_.size()) != m_ || static_cast<int>(p_.size()) != m_)
    throw std::invalid_argument("payoff vectors must match the player count");
  if (!table.complete())
    throw std::invalid_argument("raw weight table has unset entries");
  build_tables([&table](std::uint64_t mask, int k) {
    return table.get(ExerciseSet(mask), k);
  });
}

// ---------------------------------------------------------------------------
// EquilibriumReport

std::vector<double> EquilibriumReport::payoff_row(std::uint64_t id) const {
  return std::vector<double>(payoffs.begin() + static_cast<std::ptrdiff_t>(id * players),
                             payoffs.begin() + static_cast<std::ptrdiff_t>((id + 1) * players));
}

std::vector<int> EquilibriumReport::decode(std::uint64_t id) const {
  std::vector<int> out(players);
  for (int k = 0; k < players; ++k) {
    out[k] = static_cast<int>(id % strategy_counts[k]);
    id /= strategy_counts[k];
  }
  return out;
}

std::uint64_t EquilibriumReport::encode(const std::vector<int>& strategies) const {
  std::uint64_t id = 0, stride = 1;
  for (int k = 0; k < players; ++k) {
    id += static_cast<std::uint64_t>(strategies[k]) * stride;
    stride *= strategy_counts[k];
  }
  return id;
}

bool EquilibriumReport::is_optimal(std::uint64_t id) const {
  return std::binary_search(optimal.begin(), optimal.end(), id);
}

int EquilibriumReport::distinct_payoff_count(const std::vector<std::uint64_t>& ids,
                                             double tol) const {
  std::vector<std::vector<double>> reps;
  for (std::uint64_t id : ids) {
    const std::vector<double> row = payoff_row(id);
    bool fresh = true;
    for (const auto& rep : reps) {
      bool same = true;
      for (int k = 0; k < players && same; ++k)
        same = std::abs(rep[k] - row[k]) <= tol;
      if (same) {
        fresh = false;
        break;
      }
    }
    if (fresh) reps.push_back(row);
  }
  return static_cast<int>(reps.size());
}

// ---------------------------------------------------------------------------
// Generic normal-form analysis

EquilibriumReport analyze_normal_form(
    const std::vector<int>& strategy_counts,
    const std::function<void(const std::vector<int>&, std::vector<double>&)>& payoff_fn,
    double tolerance, Exec exec) {
  const int m = static_cast<int>(strategy_counts.size());
  if (m < 1) throw std::invalid_argument("at least one player required");
  std::uint64_t n = 1;
  std::vector<std::uint64_t> stride(m);
  for (int k = 0; k < m; ++k) {
    if (strategy_counts[k] < 1)
      throw std::invalid_argument("every player needs at least one strategy");
    stride[k] = n;
    n *= static_cast<std::uint64_t>(strategy_counts[k]);
    if (n > (std::uint64_t{1} << 20))
      throw InstanceTooLarge("profile space exceeds 2^20");
  }

  EquilibriumReport rep;
  rep.players = m;
  rep.strategy_counts = strategy_counts;
  rep.profile_count = n;
  rep.payoffs.assign(n * m, 0.0);

  const auto digit = [&](std::uint64_t id, int k) {
    return static_cast<int>((id / stride[k]) % strategy_counts[k]);
  };

  const bool parallel = exec == Exec::Parallel && n >= 256;
#pragma omp parallel if (parallel)
  {
    std::vector<int> strat(m);
    std::vector<double> row(m);
#pragma omp for schedule(static)
    for (std::int64_t id = 0; id < static_cast<std::int64_t>(n); ++id) {
      for (int k = 0; k < m; ++k) strat[k] = digit(id, k);
      payoff_fn(strat, row);
      std::copy(row.begin(), row.end(),
                rep.payoffs.begin() + static_cast<std::ptrdiff_t>(id) * m);
    }
  }

  // Per-player guarantee tables: worst_given_own[t] is the least payoff the
  // player can be held to while playing t; best_response_max[opp] the most he
  // can get against a fixed opponent profile.
  std::vector<std::vector<double>> worst_given_own(m);
  rep.maximin.assign(m, 0.0);
  rep.minimax.assign(m, 0.0);
#pragma omp parallel for schedule(static) if (parallel)
  for (int k = 0; k < m; ++k) {
    const int count = strategy_counts[k];
    const std::uint64_t opp_n = n / count;
    std::vector<double> mn(count, std::numeric_limits<double>::infinity());
    std::vector<double> mx(opp_n, -std::numeric_limits<double>::infinity());
    const std::uint64_t lo = stride[k], hi = lo * count;
    for (std::uint64_t id = 0; id < n; ++id) {
      const double v = rep.payoffs[id * m + k];
      const int t = digit(id, k);
      const std::uint64_t dense = id % lo + (id / hi) * lo;
      mn[t] = std::min(mn[t], v);
      mx[dense] = std::max(mx[dense], v);
    }
    rep.maximin[k] = *std::max_element(mn.begin(), mn.end());
    rep.minimax[k] = *std::min_element(mx.begin(), mx.end());
    worst_given_own[k] = std::move(mn);
  }

  std::vector<std::uint8_t> nash_flag(n, 0);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t id = 0; id < static_cast<std::int64_t>(n); ++id) {
    bool nash = true;
    for (int k = 0; k < m && nash; ++k) {
      const double own = rep.payoffs[static_cast<std::uint64_t>(id) * m + k];
      const int cur = digit(id, k);
      for (int alt = 0; alt < strategy_counts[k]; ++alt) {
        if (alt == cur) continue;
        const std::uint64_t dev = id + (static_cast<std::int64_t>(alt) - cur) *
                                           static_cast<std::int64_t>(stride[k]);
        if (rep.payoffs[dev * m + k] > own + tolerance) {
          nash = false;
          break;
        }
      }
    }
    nash_flag[id] = nash ? 1 : 0;
  }

  for (std::uint64_t id = 0; id < n; ++id) {
    if (!nash_flag[id]) continue;
    rep.nash.push_back(id);
    bool optimal = true;
    for (int k = 0; k < m && optimal; ++k)
      optimal = worst_given_own[k][digit(id, k)] >=
                rep.payoffs[id * m + k] - tolerance;
    if (optimal) rep.optimal.push_back(id);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Single-period analysis and WUC

EquilibriumReport analyze_single(const OracleGame& g, Exec exec) {
  const int m = g.players();
  std::vector<int> counts(m, 2);
  EquilibriumReport rep = analyze_normal_form(
      counts,
      [&g, m](const std::vector<int>& strat, std::vector<double>& out) {
        std::uint64_t mask = 0;
        for (int k = 0; k < m; ++k)
          if (strat[k]) mask |= std::uint64_t{1} << k;
        for (int k = 0; k < m; ++k) out[k] = g.payoff(mask, k);
      },
      g.tolerance(), exec);
  return rep;
}

EquilibriumReport analyze_single(const SinglePeriodGame& g, Exec exec) {
  return analyze_single(OracleGame(g), exec);
}

std::optional<WucWitness> check_wuc(const OracleGame& g) {
  const int m = g.players();
  if (m > 10) throw InstanceTooLarge("WUC checking is limited to 10 players");
  const double tol = g.tolerance();
  const std::uint64_t n = std::uint64_t{1} << m;
  for (int k = 0; k < m; ++k) {
    const std::uint64_t bit = std::uint64_t{1} << k;
    for (std::uint64_t base = 0; base < n; ++base) {
      if (base & bit) continue;
      const std::uint64_t a = base | bit;  // k exercises
      const double dk = g.payoff(a, k) - g.payoff(base, k);
      for (int l = 0; l < m; ++l) {
        if (l == k) continue;
        const double dl = g.payoff(a, l) - g.payoff(base, l);
        const bool bad = dk > tol    ? dl > tol
                         : dk < -tol ? dl < -tol
                                     : std::abs(dl) > tol;
        if (bad) return WucWitness{k, l, a, base};
      }
    }
  }
  return std::nullopt;
}

std::optional<WucWitness> check_wuc(const SinglePeriodGame& g) {
  return check_wuc(OracleGame(g));
}

// ---------------------------------------------------------------------------
// Canonical weight form

namespace {

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

std::optional<std::vector<double>> fit_generators(const RawWeightTable& t, double tol) {
  const int m = t.players();
  // Solve a_p, a_q from one non-degenerate singleton pair, then propagate.
  for (int p = 0; p < m; ++p) {
    for (int q = p + 1; q < m; ++q) {
      const ExerciseSet ep(std::uint64_t{1} << p), eq(std::uint64_t{1} << q);
      const double u = t.get(eq, p);  // a_p / (1 - a_q)
      const double v = t.get(ep, q);  // a_q / (1 - a_p)
      if (std::abs(1.0 - u * v) <= 1e-9) continue;
      const double aq = v * (1.0 - u) / (1.0 - u * v);
      const double ap = u * (1.0 - aq);
      std::vector<double> a(m);
      a[p] = ap;
      a[q] = aq;
      for (int k = 0; k < m; ++k)
        if (k != p && k != q) a[k] = t.get(ep, k) * (1.0 - ap);
      return a;
    }
  }
  // Every singleton pair sits on the degenerate surface u*v = 1. The only
  // consistent positive solution is the two-player constant-sum family,
  // which the table cannot pin down; report its canonical member.
  if (m == 2 && close_rel(t.get(ExerciseSet(2), 0), 1.0, tol) &&
      close_rel(t.get(ExerciseSet(1), 1), 1.0, tol))
    return std::vector<double>{0.5, 0.5};
  return std::nullopt;
}

}  // namespace

std::optional<std::vector<double>> check_weight_form(const RawWeightTable& table,
                                                     double tolerance) {
  const int m = table.players();
  if (!table.complete())
    throw std::invalid_argument("raw weight table has unset entries");
  if (m == 1) return std::vector<double>{1.0};

  const std::uint64_t full = (std::uint64_t{1} << m) - 1;
  // Condition 2: positivity everywhere.
  for (std::uint64_t mask = 1; mask < full; ++mask)
    for (int k = 0; k < m; ++k)
      if (!((mask >> k) & 1u) && !(table.get(ExerciseSet(mask), k) > 0.0))
        return std::nullopt;
  // Condition 1: w_i(E + j) (1 - w_j(E)) = w_i(E).
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    const int pc = __builtin_popcountll(mask);
    if (pc > m - 2) continue;
    for (int j = 0; j < m; ++j) {
      if ((mask >> j) & 1u) continue;
      const std::uint64_t grown = mask | (std::uint64_t{1} << j);
      if (grown == full) continue;
      for (int i = 0; i < m; ++i) {
        if (((mask >> i) & 1u) || i == j) continue;
        const double lhs = table.get(ExerciseSet(grown), i) *
                           (1.0 - table.get(ExerciseSet(mask), j));
        if (!close_rel(lhs, table.get(ExerciseSet(mask), i), tolerance))
          return std::nullopt;
      }
    }
  }

  std::optional<std::vector<double>> a = fit_generators(table, tolerance);
  if (!a) return std::nullopt;
  for (double x : *a)
    if (!(x > 0.0) || !std::isfinite(x)) return std::nullopt;
  // Full verification of the recovered generators against the table.
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    double denom = 1.0;
    for (int i = 0; i < m; ++i)
      if ((mask >> i) & 1u) denom -= (*a)[i];
    if (!(denom > 0.0)) return std::nullopt;
    for (int k = 0; k < m; ++k) {
      if ((mask >> k) & 1u) continue;
      if (!close_rel((*a)[k] / denom, table.get(ExerciseSet(mask), k), tolerance))
        return std::nullopt;
    }
  }
  return a;
}

std::optional<WucSearchResult> search_wuc_violation(const RawWeightTable& table,
                                                    std::uint64_t seed, int attempts,
                                                    double tolerance) {
  const int m = table.players();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (int trial = 0; trial < attempts; ++trial) {
    std::vector<double> x(m), p(m);
    for (double& v : x) v = dist(rng);
    for (double& v : p) v = dist(rng);
    OracleGame g(table, x, p, tolerance);
    if (auto witness = check_wuc(g))
      return WucSearchResult{std::move(x), std::move(p), *witness};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Stopping-game verification

namespace {

std::vector<int> internal_nodes(const EventTree& tree) {
  std::vector<int> out;
  for (int i = 0; i < tree.node_count(); ++i)
    if (!tree.is_leaf(i)) out.push_back(i);
  return out;
}

StoppingRule rule_from_masks(const EventTree& tree, const std::vector<int>& internals,
                             const std::vector<std::uint32_t>& masks) {
  const int m = tree.players();
  StoppingRule rule;
  rule.stop.assign(m, std::vector<std::uint8_t>(tree.node_count(), 0));
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < tree.node_count(); ++i)
      if (tree.is_leaf(i)) rule.stop[k][i] = 1;
    for (std::size_t j = 0; j < internals.size(); ++j)
      if ((masks[k] >> j) & 1u) rule.stop[k][internals[j]] = 1;
  }
  return rule;
}

std::uint32_t mask_from_rule(const StoppingRule& rule, const std::vector<int>& internals,
                             int player) {
  std::uint32_t mask = 0;
  for (std::size_t j = 0; j < internals.size(); ++j)
    if (rule.stop[player][internals[j]]) mask |= std::uint32_t{1} << j;
  return mask;
}

}  // namespace

bool verify_stopping_equilibrium(const EventTree& tree, const WeightSystem& w,
                                 const StoppingRule& candidate, const ValueProcess& u,
                                 Exec exec) {
  const int m = tree.players();
  const std::vector<int> internals = internal_nodes(tree);
  if (m > 3) throw InstanceTooLarge("stopping verification is limited to 3 players");
  if (internals.size() > 8)
    throw InstanceTooLarge("stopping verification is limited to 8 internal nodes");

  const double tol = w.tolerance();
  const PayoffVector base = evaluate_stopping_profile(tree, w, candidate, u);
  std::vector<std::uint32_t> cand_masks(m);
  for (int k = 0; k < m; ++k) cand_masks[k] = mask_from_rule(candidate, internals, k);

  const std::uint32_t per_player = std::uint32_t{1} << internals.size();
  std::atomic<bool> ok{true};

  // Own deviations must not improve the deviator.
  for (int k = 0; k < m; ++k) {
    for (std::uint32_t dev = 0; dev < per_player && ok.load(); ++dev) {
      std::vector<std::uint32_t> masks = cand_masks;
      masks[k] = dev;
      const PayoffVector v =
          evaluate_stopping_profile(tree, w, rule_from_masks(tree, internals, masks), u);
      if (v[k] > base[k] + tol) ok.store(false);
    }
  }
  if (!ok.load()) return false;

  // Joint opponent deviations must not hurt the player.
  for (int k = 0; k < m; ++k) {
    const int others = m - 1;
    const std::uint64_t joint_n = std::uint64_t{1} << (internals.size() * others);
    const bool parallel = exec == Exec::Parallel && joint_n >= 512;
#pragma omp parallel for schedule(dynamic, 64) if (parallel)
    for (std::int64_t joint = 0; joint < static_cast<std::int64_t>(joint_n); ++joint) {
      if (!ok.load(std::memory_order_relaxed)) continue;
      std::vector<std::uint32_t> masks(m);
      std::uint64_t rest = joint;
      for (int l = 0; l < m; ++l) {
        if (l == k) {
          masks[l] = cand_masks[k];
        } else {
          masks[l] = static_cast<std::uint32_t>(rest % per_player);
          rest /= per_player;
        }
      }
      const PayoffVector v =
          evaluate_stopping_profile(tree, w, rule_from_masks(tree, internals, masks), u);
      if (v[k] < base[k] - tol) ok.store(false, std::memory_order_relaxed);
    }
    if (!ok.load()) return false;
  }
  return true;
}

EquilibriumReport analyze_natural_chain(const EventTree& tree, const WeightSystem& w,
                                        Exec exec) {
  if (!tree.is_chain())
    throw std::invalid_argument("the natural variant is defined on chains only");
  if (w.players() != tree.players())
    throw std::invalid_argument("weight system does not match the tree");
  const int m = tree.players();
  const int horizon = tree.horizon();

  std::vector<std::vector<double>> rows(horizon + 1);
  int node = tree.root();
  for (int t = 0; t <= horizon; ++t) {
    rows[t] = tree.node(node).x;
    if (!tree.is_leaf(node)) node = tree.node(node).children.front().node;
  }

  std::vector<int> counts(m, horizon + 1);
  return analyze_normal_form(
      counts,
      [&rows, m, horizon, &w](const std::vector<int>& times, std::vector<double>& out) {
        int first = horizon;
        for (int k = 0; k < m; ++k) first = std::min(first, times[k]);
        if (first == horizon) {
          std::copy(rows[horizon].begin(), rows[horizon].end(), out.begin());
          return;
        }
        ExerciseSet stoppers;
        for (int k = 0; k < m; ++k)
          if (times[k] == first) stoppers.add(k);
        const PayoffVector v =
            project_hyperplane(rows[horizon], stoppers, rows[first], w);
        std::copy(v.begin(), v.end(), out.begin());
      },
      w.tolerance(), exec);
}

// ---------------------------------------------------------------------------
// Quitting-game verification

EquilibriumReport verify_quitting(const QuittingGame& q, Exec exec) {
  const int m = q.players();
  const int horizon = q.horizon();
  std::vector<int> counts(m, horizon + 1);
  return analyze_normal_form(
      counts,
      [&q](const std::vector<int>& times, std::vector<double>& out) {
        const PayoffVector v = quitting_payoff(q, QuittingProfile{times});
        std::copy(v.begin(), v.end(), out.begin());
      },
      q.weights.tolerance(), exec);
}

StochasticQuittingGame::StochasticQuittingGame(
    WeightSystem w, std::vector<double> probs,
    std::vector<std::vector<std::vector<double>>> rows)
    : weights(std::move(w)), probabilities(std::move(probs)), scenario_rows(std::move(rows)) {
  if (probabilities.empty() || probabilities.size() != scenario_rows.size())
    throw std::invalid_argument("one probability per scenario required");
  double total = 0.0;
  for (double p : probabilities) {
    if (!std::isfinite(p) || p < 0.0)
      throw std::invalid_argument("scenario probabilities must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > weights.tolerance())
    throw std::invalid_argument("scenario probabilities must sum to 1");
  const std::size_t t_rows = scenario_rows[0].size();
  if (t_rows < 2) throw std::invalid_argument("quitting game needs horizon >= 1");
  for (const auto& scenario : scenario_rows) {
    if (scenario.size() != t_rows)
      throw std::invalid_argument("every scenario needs the same horizon");
    for (const auto& row : scenario)
      if (static_cast<int>(row.size()) != players())
        throw std::invalid_argument("payoff rows must have one entry per player");
    for (int k = 0; k < players(); ++k)
      if (std::abs(scenario[0][k] - scenario_rows[0][0][k]) > weights.tolerance())
        throw std::invalid_argument("time-0 payoffs must not depend on the scenario");
  }
}

EquilibriumReport analyze_quitting_stochastic(const StochasticQuittingGame& q, Exec exec) {
  const int m = q.players();
  const int horizon = q.horizon();
  const int scenarios = q.scenario_count();

  // A strategy is either "exercise at 0" or a map scenario -> time in [1, T].
  std::uint64_t maps = 1;
  for (int s = 0; s < scenarios; ++s) {
    maps *= static_cast<std::uint64_t>(horizon);
    if (maps > (std::uint64_t{1} << 20))
      throw InstanceTooLarge("stochastic strategy space exceeds 2^20");
  }
  const int per_player = static_cast<int>(1 + maps);

  std::vector<QuittingGame> games;
  games.reserve(scenarios);
  for (int s = 0; s < scenarios; ++s)
    games.emplace_back(q.weights, q.scenario_rows[s]);

  const auto time_in_scenario = [horizon](int strategy, int scenario) {
    if (strategy == 0) return 0;
    std::uint64_t rest = static_cast<std::uint64_t>(strategy - 1);
    for (int s = 0; s < scenario; ++s) rest /= horizon;
    return 1 + static_cast<int>(rest % horizon);
  };

  std::vector<int> counts(m, per_player);
  return analyze_normal_form(
      counts,
      [&](const std::vector<int>& strat, std::vector<double>& out) {
        std::fill(out.begin(), out.end(), 0.0);
        QuittingProfile times{std::vector<int>(m, 0)};
        for (int s = 0; s < static_cast<int>(games.size()); ++s) {
          for (int k = 0; k < m; ++k) times.times[k] = time_in_scenario(strat[k], s);
          const PayoffVector v = quitting_payoff(games[s], times);
          for (int k = 0; k < m; ++k) out[k] += q.probabilities[s] * v[k];
        }
      },
      q.weights.tolerance(), exec);
}

}  // namespace dynkin
