#include "dynkin/spec_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace dynkin::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& message) {
  throw SpecError(origin + ": " + message);
}

const json& need(const json& j, const char* key, const std::string& origin,
                 const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) fail(origin, ctx + ": missing required field '" + key + "'");
  return *it;
}

double as_number(const json& j, const std::string& origin, const std::string& ctx) {
  if (!j.is_number()) fail(origin, ctx + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(origin, ctx + ": value must be finite");
  return v;
}

int as_int(const json& j, const std::string& origin, const std::string& ctx) {
  if (!j.is_number_integer()) fail(origin, ctx + ": expected an integer");
  return j.get<int>();
}

std::vector<double> as_vector(const json& j, const std::string& origin,
                              const std::string& ctx) {
  if (!j.is_array() || j.empty()) fail(origin, ctx + ": expected a nonempty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_number(j[i], origin, ctx + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::vector<double>> as_matrix(const json& j, const std::string& origin,
                                           const std::string& ctx) {
  if (!j.is_array() || j.empty()) fail(origin, ctx + ": expected a nonempty array of rows");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_vector(j[i], origin, ctx + "[" + std::to_string(i) + "]"));
  return out;
}

// 1-based player index from a file.
int as_player(const json& j, int m, const std::string& origin, const std::string& ctx) {
  const int k = as_int(j, origin, ctx);
  if (k < 1 || k > m) fail(origin, ctx + ": player index must lie in 1.." + std::to_string(m));
  return k - 1;
}

WeightSystem parse_weights(const json& j, double tolerance, const std::string& origin) {
  const std::vector<double> a = as_vector(need(j, "a", origin, "document"), origin, "a");
  try {
    return WeightSystem(a, tolerance);
  } catch (const std::invalid_argument& e) {
    fail(origin, std::string("a: ") + e.what());
  }
}

void parse_single(const json& j, GameSpec& spec, const std::string& origin) {
  spec.weights = parse_weights(j, spec.tolerance, origin);
  spec.players = spec.weights->players();
  const auto x = as_vector(need(j, "X", origin, "document"), origin, "X");
  const auto p = as_vector(need(j, "P", origin, "document"), origin, "P");
  try {
    spec.single = SinglePeriodGame(*spec.weights, x, p);
  } catch (const std::invalid_argument& e) {
    fail(origin, e.what());
  }
}

void parse_stochastic(const json& j, GameSpec& spec, const std::string& origin) {
  spec.weights = parse_weights(j, spec.tolerance, origin);
  spec.players = spec.weights->players();
  const json& sc = need(j, "scenarios", origin, "document");
  if (!sc.is_array() || sc.empty())
    fail(origin, "scenarios: expected a nonempty array");
  ScenarioSet set;
  for (std::size_t i = 0; i < sc.size(); ++i) {
    const std::string ctx = "scenarios[" + std::to_string(i) + "]";
    Scenario s;
    s.probability = as_number(need(sc[i], "probability", origin, ctx), origin,
                              ctx + ".probability");
    s.exercise_payoff = as_vector(need(sc[i], "X", origin, ctx), origin, ctx + ".X");
    s.terminal_payoff = as_vector(need(sc[i], "P", origin, ctx), origin, ctx + ".P");
    set.scenarios.push_back(std::move(s));
  }
  try {
    set.validate(spec.players, spec.tolerance);
  } catch (const std::invalid_argument& e) {
    fail(origin, std::string("scenarios: ") + e.what());
  }
  spec.scenario_set = std::move(set);
}

void parse_quitting(const json& j, GameSpec& spec, const std::string& origin) {
  spec.weights = parse_weights(j, spec.tolerance, origin);
  spec.players = spec.weights->players();
  const bool has_paths = j.contains("X_paths");
  const bool has_scenarios = j.contains("scenarios");
  if (has_paths == has_scenarios)
    fail(origin, "quitting games need exactly one of 'X_paths' or 'scenarios'");
  try {
    if (has_paths) {
      spec.quitting = QuittingGame(
          *spec.weights, as_matrix(j["X_paths"], origin, "X_paths"));
    } else {
      const json& sc = j["scenarios"];
      if (!sc.is_array() || sc.empty())
        fail(origin, "scenarios: expected a nonempty array");
      std::vector<double> probs;
      std::vector<std::vector<std::vector<double>>> rows;
      for (std::size_t i = 0; i < sc.size(); ++i) {
        const std::string ctx = "scenarios[" + std::to_string(i) + "]";
        probs.push_back(as_number(need(sc[i], "probability", origin, ctx), origin,
                                  ctx + ".probability"));
        rows.push_back(as_matrix(need(sc[i], "X_paths", origin, ctx), origin,
                                 ctx + ".X_paths"));
      }
      spec.stochastic_quitting =
          StochasticQuittingGame(*spec.weights, std::move(probs), std::move(rows));
    }
  } catch (const std::invalid_argument& e) {
    fail(origin, e.what());
  }
}

void parse_stopping(const json& j, GameSpec& spec, const std::string& origin) {
  spec.weights = parse_weights(j, spec.tolerance, origin);
  spec.players = spec.weights->players();
  if (auto it = j.find("variant"); it != j.end()) {
    const std::string v = it->is_string() ? it->get<std::string>() : std::string();
    if (v == "natural")
      spec.natural_variant = true;
    else if (v != "value")
      fail(origin, "variant: expected \"value\" or \"natural\"");
  }
  const json& node_list = need(j, "nodes", origin, "document");
  if (!node_list.is_array() || node_list.empty())
    fail(origin, "nodes: expected a nonempty array");

  const auto id_of = [&](const json& v, const std::string& ctx) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    fail(origin, ctx + ": node ids must be strings or integers");
  };

  std::map<std::string, int> index;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < node_list.size(); ++i) {
    const std::string ctx = "nodes[" + std::to_string(i) + "]";
    std::string id = id_of(need(node_list[i], "id", origin, ctx), ctx + ".id");
    if (!index.emplace(id, static_cast<int>(i)).second)
      fail(origin, ctx + ".id: duplicate node id '" + id + "'");
    labels.push_back(std::move(id));
  }

  std::vector<TreeNode> nodes(node_list.size());
  for (std::size_t i = 0; i < node_list.size(); ++i) {
    const std::string ctx = "nodes[" + std::to_string(i) + "]";
    const json& nj = node_list[i];
    nodes[i].time = as_int(need(nj, "time", origin, ctx), origin, ctx + ".time");
    nodes[i].x = as_vector(need(nj, "X", origin, ctx), origin, ctx + ".X");
    if (auto it = nj.find("children"); it != nj.end()) {
      if (!it->is_array()) fail(origin, ctx + ".children: expected an array");
      for (std::size_t c = 0; c < it->size(); ++c) {
        const std::string cctx = ctx + ".children[" + std::to_string(c) + "]";
        const json& cj = (*it)[c];
        const std::string id = id_of(need(cj, "id", origin, cctx), cctx + ".id");
        auto found = index.find(id);
        if (found == index.end()) fail(origin, cctx + ".id: unknown node '" + id + "'");
        nodes[i].children.push_back(
            TreeChild{found->second,
                      as_number(need(cj, "probability", origin, cctx), origin,
                                cctx + ".probability")});
      }
    }
  }

  int root = 0;
  if (auto it = j.find("root"); it != j.end()) {
    const std::string id = id_of(*it, "root");
    auto found = index.find(id);
    if (found == index.end()) fail(origin, "root: unknown node '" + id + "'");
    root = found->second;
  }
  try {
    spec.tree = EventTree(spec.players, std::move(nodes), root, std::move(labels),
                          spec.tolerance);
  } catch (const std::invalid_argument& e) {
    fail(origin, std::string("nodes: ") + e.what());
  }
  if (spec.natural_variant && !spec.tree->is_chain())
    fail(origin, "variant: the natural variant requires a chain (one child per node)");
}

void parse_raw_weights(const json& j, GameSpec& spec, const std::string& origin) {
  const int m = as_int(need(j, "m", origin, "document"), origin, "m");
  if (m < 1 || m > 15) fail(origin, "m: raw-weight games support 1..15 players");
  spec.players = m;

  const bool has_generators = j.contains("generators");
  const bool has_entries = j.contains("weights");
  if (has_generators == has_entries)
    fail(origin, "raw-weight games need exactly one of 'generators' or 'weights'");
  try {
    if (has_generators) {
      const auto a = as_vector(j["generators"], origin, "generators");
      if (static_cast<int>(a.size()) != m)
        fail(origin, "generators: expected one entry per player");
      spec.raw_table = RawWeightTable::from_generators(a);
    } else {
      const json& entries = j["weights"];
      if (!entries.is_array() || entries.empty())
        fail(origin, "weights: expected a nonempty array");
      RawWeightTable table(m);
      for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string ctx = "weights[" + std::to_string(i) + "]";
        const json& ej = entries[i];
        const json& e_list = need(ej, "E", origin, ctx);
        if (!e_list.is_array() || e_list.empty())
          fail(origin, ctx + ".E: expected a nonempty array of players");
        ExerciseSet e;
        for (std::size_t c = 0; c < e_list.size(); ++c)
          e.add(as_player(e_list[c], m, origin, ctx + ".E[" + std::to_string(c) + "]"));
        const int k = as_player(need(ej, "k", origin, ctx), m, origin, ctx + ".k");
        table.set(e, k, as_number(need(ej, "w", origin, ctx), origin, ctx + ".w"));
      }
      if (!table.complete())
        fail(origin, "weights: table is incomplete (every nonempty proper subset E and "
                     "player outside E needs an entry)");
      spec.raw_table = std::move(table);
    }
  } catch (const std::invalid_argument& e) {
    fail(origin, e.what());
  }

  const bool has_x = j.contains("X"), has_p = j.contains("P");
  if (has_x != has_p) fail(origin, "raw-weight games need both X and P or neither");
  if (has_x) {
    spec.raw_x = as_vector(j["X"], origin, "X");
    spec.raw_p = as_vector(j["P"], origin, "P");
    if (static_cast<int>(spec.raw_x.size()) != m ||
        static_cast<int>(spec.raw_p.size()) != m)
      fail(origin, "X/P: expected one entry per player");
    spec.raw_has_payoffs = true;
  }
}

}  // namespace

const char* kind_name(GameKind kind) {
  switch (kind) {
    case GameKind::Single: return "single";
    case GameKind::Stochastic: return "stochastic";
    case GameKind::Quitting: return "quitting";
    case GameKind::Stopping: return "stopping";
    case GameKind::RawWeights: return "raw-weights";
  }
  return "?";
}

GameSpec parse_game_spec(const std::string& text, const std::string& origin,
                         std::optional<double> tolerance_override) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    fail(origin, "line " + std::to_string(line) + ": " + e.what());
  }
  if (!j.is_object()) fail(origin, "expected a JSON object");

  GameSpec spec;
  if (tolerance_override) {
    spec.tolerance = *tolerance_override;
  } else if (auto it = j.find("tolerance"); it != j.end()) {
    spec.tolerance = as_number(*it, origin, "tolerance");
  }
  if (!(spec.tolerance > 0.0) || !std::isfinite(spec.tolerance))
    fail(origin, "tolerance: must be positive and finite");

  const json& kind = need(j, "kind", origin, "document");
  const std::string name = kind.is_string() ? kind.get<std::string>() : std::string();
  if (name == "single") {
    spec.kind = GameKind::Single;
    parse_single(j, spec, origin);
  } else if (name == "stochastic") {
    spec.kind = GameKind::Stochastic;
    parse_stochastic(j, spec, origin);
  } else if (name == "quitting") {
    spec.kind = GameKind::Quitting;
    parse_quitting(j, spec, origin);
  } else if (name == "stopping") {
    spec.kind = GameKind::Stopping;
    parse_stopping(j, spec, origin);
  } else if (name == "raw-weights") {
    spec.kind = GameKind::RawWeights;
    parse_raw_weights(j, spec, origin);
  } else {
    fail(origin, "kind: expected one of single, stochastic, quitting, stopping, raw-weights");
  }
  return spec;
}

GameSpec load_game_spec(const std::string& path,
                        std::optional<double> tolerance_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_game_spec(buf.str(), path, tolerance_override);
}

}  // namespace dynkin::io
