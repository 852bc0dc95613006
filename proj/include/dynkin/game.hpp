// Core types for multi-player exercise games: weight systems, strategy
// profiles, the single-period payoff rule and subgame reduction.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace dynkin {

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr int kMaxPlayers = 62;

// Thrown when an instance exceeds a brute-force size guard.
struct InstanceTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Generator sum strictly below 1, or equal to 1 (constant-sum payoffs).
enum class Regime { Strict, Saturated };

// A subset of players stored as a bitmask. Player indices are 0-based
// throughout the library; reports translate to 1-based on output.
class ExerciseSet {
 public:
  constexpr ExerciseSet() = default;
  constexpr explicit ExerciseSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr ExerciseSet full(int m) {
    return ExerciseSet((std::uint64_t{1} << m) - 1);
  }

  constexpr bool contains(int k) const { return (bits_ >> k) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool is_full(int m) const { return bits_ == full(m).bits_; }
  constexpr std::uint64_t bits() const { return bits_; }
  int count() const { return __builtin_popcountll(bits_); }

  void add(int k) { bits_ |= std::uint64_t{1} << k; }
  void remove(int k) { bits_ &= ~(std::uint64_t{1} << k); }

  std::vector<int> members(int m) const {
    std::vector<int> out;
    for (int k = 0; k < m; ++k)
      if (contains(k)) out.push_back(k);
    return out;
  }

  friend constexpr bool operator==(ExerciseSet a, ExerciseSet b) {
    return a.bits_ == b.bits_;
  }

 private:
  std::uint64_t bits_ = 0;
};

// The generators a_1..a_m of the redistribution weights. Construction
// validates positivity and the sum bound; the regime flag is decided by
// the same tolerance used for payoff comparisons downstream.
class WeightSystem {
 public:
  explicit WeightSystem(std::vector<double> generators,
                        double tolerance = kDefaultTolerance);

  int players() const { return static_cast<int>(a_.size()); }
  const std::vector<double>& generators() const { return a_; }
  double generator(int k) const { return a_[k]; }
  double generator_sum() const { return sum_; }
  Regime regime() const { return regime_; }
  double tolerance() const { return tol_; }

 private:
  std::vector<double> a_;
  double sum_ = 0.0;
  double tol_ = kDefaultTolerance;
  Regime regime_ = Regime::Strict;
};

// Per-player exercise decisions. Internally a mask of exercising players;
// decisions() reproduces the 0 = exercise, 1 = wait encoding.
class StrategyProfile {
 public:
  StrategyProfile(int m, ExerciseSet exercisers)
      : m_(m), exercisers_(exercisers) {}

  // decisions[k] == 0 means player k exercises.
  static StrategyProfile from_decisions(const std::vector<int>& decisions);

  int players() const { return m_; }
  ExerciseSet exercisers() const { return exercisers_; }
  std::vector<int> decisions() const;

  friend bool operator==(const StrategyProfile& a, const StrategyProfile& b) {
    return a.m_ == b.m_ && a.exercisers_ == b.exercisers_;
  }

 private:
  int m_;
  ExerciseSet exercisers_;
};

using PayoffVector = std::vector<double>;

struct SinglePeriodGame {
  SinglePeriodGame(WeightSystem weights, std::vector<double> exercise_payoff,
                   std::vector<double> terminal_payoff);

  int players() const { return weights.players(); }

  WeightSystem weights;
  std::vector<double> exercise_payoff;  // X
  std::vector<double> terminal_payoff;  // P
};

// w_k(E) = a_k / (1 - sum of a_i over E). Requires k outside E and E a
// proper subset; E may be empty (then the weight is just a_k).
double weight(const WeightSystem& w, ExerciseSet e, int k);

// Sum over exercising players of (exercise payoff - terminal payoff).
double exercise_difference(const SinglePeriodGame& g, ExerciseSet e);

// The payoff vector of the profile with exercise set e: exercisers get X,
// everyone else gets P shifted by their weighted share of the difference.
PayoffVector payoff(const SinglePeriodGame& g, ExerciseSet e);
PayoffVector payoff(const SinglePeriodGame& g, const StrategyProfile& s);

// The game left to players outside e once e is committed to exercising.
// Remaining players keep their relative order; remaining_players gives the
// index map back into the original game.
SinglePeriodGame subgame(const SinglePeriodGame& g, ExerciseSet e);
std::vector<int> remaining_players(ExerciseSet e, int m);

}  // namespace dynkin
