// Parsing and validation of game specification files. One JSON document
// format for every game kind, discriminated by "kind"; player indices in
// files are 1-based to match the usual game-theoretic numbering.
#pragma once

#include <optional>
#include <string>

#include "dynkin/event_tree.hpp"
#include "dynkin/game.hpp"
#include "dynkin/oracle.hpp"
#include "dynkin/solver.hpp"

namespace dynkin::io {

// Parse or validation failure; the message carries file/line context.
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class GameKind { Single, Stochastic, Quitting, Stopping, RawWeights };

const char* kind_name(GameKind kind);

struct GameSpec {
  GameKind kind = GameKind::Single;
  double tolerance = kDefaultTolerance;
  int players = 0;

  std::optional<WeightSystem> weights;  // kinds with validated generators

  std::optional<SinglePeriodGame> single;
  std::optional<ScenarioSet> scenario_set;
  std::optional<QuittingGame> quitting;
  std::optional<StochasticQuittingGame> stochastic_quitting;
  std::optional<EventTree> tree;
  bool natural_variant = false;

  std::optional<RawWeightTable> raw_table;
  std::vector<double> raw_x, raw_p;
  bool raw_has_payoffs = false;
};

// tolerance_override, when set, wins over the file's optional "tolerance".
GameSpec parse_game_spec(const std::string& text, const std::string& origin,
                         std::optional<double> tolerance_override = std::nullopt);
GameSpec load_game_spec(const std::string& path,
                        std::optional<double> tolerance_override = std::nullopt);

}  // namespace dynkin::io
