// Command-line front end: solve | verify | wuc over game specification
// files. Human-readable reports print values with 9 decimal places; machine
// output (--machine) is a single JSON document with full-precision decimal
// strings. Exit codes: 0 ok, 1 negative verdict, 2 invalid input, 3 instance
// too large for the brute-force oracles.
#include <charconv>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dynkin/event_tree.hpp"
#include "dynkin/game.hpp"
#include "dynkin/oracle.hpp"
#include "dynkin/projection.hpp"
#include "dynkin/solver.hpp"
#include "dynkin/spec_io.hpp"
#include "json.hpp"

namespace {

using dynkin::io::GameKind;
using dynkin::io::GameSpec;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitTooLarge = 3;

struct Options {
  std::string command;
  std::string path;
  std::optional<double> tolerance;
  bool machine = false;
  std::uint64_t seed = 20240901;
};

void usage(std::ostream& out) {
  out << "usage: dynkin <solve|verify|wuc> <game-file> [options]\n"
         "\n"
         "  solve    compute the value and a pure optimal equilibrium\n"
         "  verify   cross-check against the brute-force oracle\n"
         "  wuc      weight-form fit and weak-unilateral-competitiveness check\n"
         "\n"
         "options:\n"
         "  --tolerance <real>  comparison tolerance (default 1e-9)\n"
         "  --machine           machine-readable JSON output\n"
         "  --seed <int>        seed for randomized oracle searches\n";
}

// Shortest decimal string that round-trips to the same double.
std::string full_precision(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fixed9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

std::string vec9(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fixed9(v[i]);
  }
  return out + "]";
}

ordered_json vec_json(const std::vector<double>& v) {
  ordered_json out = ordered_json::array();
  for (double x : v) out.push_back(full_precision(x));
  return out;
}

std::string set_string(dynkin::ExerciseSet e, int m) {
  std::string out = "{";
  bool first = true;
  for (int k : e.members(m)) {
    if (!first) out += ", ";
    out += std::to_string(k + 1);
    first = false;
  }
  return out + "}";
}

ordered_json set_json(dynkin::ExerciseSet e, int m) {
  ordered_json out = ordered_json::array();
  for (int k : e.members(m)) out.push_back(k + 1);
  return out;
}

const char* regime_name(const dynkin::WeightSystem& w) {
  return w.regime() == dynkin::Regime::Saturated ? "saturated" : "strict";
}

std::string profile_string(const std::vector<int>& entries) {
  std::string out = "(";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(entries[i]);
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// solve

int solve_single_kind(const GameSpec& spec, const Options& opt) {
  const dynkin::SolveResult res =
      spec.kind == GameKind::Single
          ? dynkin::solve_single(*spec.single)
          : dynkin::solve_single_stochastic(*spec.scenario_set, *spec.weights);
  const int m = spec.players;
  if (opt.machine) {
    ordered_json out;
    out["kind"] = dynkin::io::kind_name(spec.kind);
    out["players"] = m;
    out["regime"] = regime_name(*spec.weights);
    out["tolerance"] = full_precision(spec.tolerance);
    out["value"] = vec_json(res.value);
    out["exercisers"] = set_json(res.active_set, m);
    out["decisions"] = res.equilibrium.decisions();
    std::cout << out.dump() << "\n";
    return kExitOk;
  }
  std::cout << "kind: " << dynkin::io::kind_name(spec.kind) << "\n"
            << "players: " << m << "\n"
            << "regime: " << regime_name(*spec.weights) << "\n"
            << "value: " << vec9(res.value) << "\n"
            << "exercisers: " << set_string(res.active_set, m) << "\n"
            << "equilibrium: s = " << profile_string(res.equilibrium.decisions())
            << "  (0 = exercise)\n";
  return kExitOk;
}

int solve_quitting_kind(const GameSpec& spec, const Options& opt) {
  if (spec.stochastic_quitting) {
    std::cerr << "error: stochastic quitting games have no pure-strategy solver; "
                 "use 'verify'\n";
    return kExitInvalid;
  }
  const dynkin::QuittingSolveResult res = dynkin::solve_quitting(*spec.quitting);
  const int m = spec.players;
  if (opt.machine) {
    ordered_json out;
    out["kind"] = "quitting";
    out["players"] = m;
    out["horizon"] = spec.quitting->horizon();
    out["regime"] = regime_name(*spec.weights);
    out["tolerance"] = full_precision(spec.tolerance);
    out["value"] = vec_json(res.value);
    out["exercisers"] = set_json(res.active_set, m);
    out["times"] = res.equilibrium.times;
    std::cout << out.dump() << "\n";
    return kExitOk;
  }
  std::cout << "kind: quitting\n"
            << "players: " << m << "\n"
            << "horizon: " << spec.quitting->horizon() << "\n"
            << "regime: " << regime_name(*spec.weights) << "\n"
            << "value: " << vec9(res.value) << "\n"
            << "exercisers: " << set_string(res.active_set, m) << "\n"
            << "times: " << profile_string(res.equilibrium.times) << "\n";
  return kExitOk;
}

int solve_stopping_kind(const GameSpec& spec, const Options& opt) {
  if (spec.natural_variant) {
    std::cerr << "error: the natural variant has no value in general; use 'verify'\n";
    return kExitInvalid;
  }
  const dynkin::EventTree& tree = *spec.tree;
  const dynkin::ValueProcess u = dynkin::value_process(tree, *spec.weights);
  const dynkin::StoppingRule rule =
      dynkin::equilibrium_stopping(tree, u, spec.tolerance);
  const int m = spec.players;

  std::vector<std::vector<std::string>> stops(m);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < tree.node_count(); ++i)
      if (rule.stop[k][i]) stops[k].push_back(tree.label(i));

  if (opt.machine) {
    ordered_json out;
    out["kind"] = "stopping";
    out["players"] = m;
    out["horizon"] = tree.horizon();
    out["regime"] = regime_name(*spec.weights);
    out["tolerance"] = full_precision(spec.tolerance);
    out["value"] = vec_json(u[tree.root()]);
    ordered_json nodes = ordered_json::array();
    for (int i = 0; i < tree.node_count(); ++i) {
      ordered_json nj;
      nj["id"] = tree.label(i);
      nj["time"] = tree.node(i).time;
      nj["U"] = vec_json(u[i]);
      nodes.push_back(std::move(nj));
    }
    out["value_process"] = std::move(nodes);
    ordered_json sj = ordered_json::array();
    for (int k = 0; k < m; ++k) sj.push_back(stops[k]);
    out["stop_nodes"] = std::move(sj);
    std::cout << out.dump() << "\n";
    return kExitOk;
  }
  std::cout << "kind: stopping\n"
            << "players: " << m << "\n"
            << "horizon: " << tree.horizon() << "\n"
            << "regime: " << regime_name(*spec.weights) << "\n"
            << "value: " << vec9(u[tree.root()]) << "\n";
  for (int k = 0; k < m; ++k) {
    std::cout << "stop nodes (player " << (k + 1) << "): {";
    for (std::size_t i = 0; i < stops[k].size(); ++i)
      std::cout << (i ? ", " : "") << stops[k][i];
    std::cout << "}\n";
  }
  return kExitOk;
}

int cmd_solve(const GameSpec& spec, const Options& opt) {
  switch (spec.kind) {
    case GameKind::Single:
    case GameKind::Stochastic:
      return solve_single_kind(spec, opt);
    case GameKind::Quitting:
      return solve_quitting_kind(spec, opt);
    case GameKind::Stopping:
      return solve_stopping_kind(spec, opt);
    case GameKind::RawWeights:
      std::cerr << "error: raw-weight games bypass the solver; use 'verify' or 'wuc'\n";
      return kExitInvalid;
  }
  return kExitInvalid;
}

// ---------------------------------------------------------------------------
// verify

// How a decoded strategy digit reads: exercise bits are reported in the
// 0 = exercise convention; time digits are exercise times as-is.
enum class ProfileStyle { ExerciseBits, Times };

void print_report_summary(const dynkin::EquilibriumReport& rep, ProfileStyle style,
                          std::ostream& out) {
  out << "profiles: " << rep.profile_count << "\n";
  if (rep.nash.empty()) {
    out << "pure Nash: none\n";
  } else {
    out << "pure Nash: " << rep.nash.size() << "\n";
    if (rep.nash.size() <= 8) {
      for (std::uint64_t id : rep.nash) {
        std::vector<int> strat = rep.decode(id);
        if (style == ProfileStyle::ExerciseBits)
          for (int& d : strat) d = 1 - d;
        out << "  " << (style == ProfileStyle::ExerciseBits ? "s = " : "times ")
            << profile_string(strat) << " -> " << vec9(rep.payoff_row(id))
            << (rep.is_optimal(id) ? "  [optimal]" : "") << "\n";
      }
    }
  }
  out << "optimal equilibria: " << rep.optimal.size() << "\n"
      << "maximin: " << vec9(rep.maximin) << "\n"
      << "minimax: " << vec9(rep.minimax) << "\n";
}

ordered_json report_json(const dynkin::EquilibriumReport& rep) {
  ordered_json out;
  out["profiles"] = rep.profile_count;
  out["nash"] = rep.nash;
  out["optimal"] = rep.optimal;
  out["maximin"] = vec_json(rep.maximin);
  out["minimax"] = vec_json(rep.minimax);
  return out;
}

bool values_agree(const std::vector<double>& a, const std::vector<double>& b,
                  double tol) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

int verify_single_kind(const GameSpec& spec, const Options& opt) {
  const int m = spec.players;
  dynkin::EquilibriumReport rep;
  std::optional<dynkin::SolveResult> solved;
  if (spec.kind == GameKind::RawWeights) {
    if (!spec.raw_has_payoffs) {
      std::cerr << "error: verify needs X and P in the game file\n";
      return kExitInvalid;
    }
    rep = dynkin::analyze_single(
        dynkin::OracleGame(*spec.raw_table, spec.raw_x, spec.raw_p, spec.tolerance));
  } else if (spec.kind == GameKind::Single) {
    rep = dynkin::analyze_single(*spec.single);
    solved = dynkin::solve_single(*spec.single);
  } else {
    // Stochastic: the oracle works on the expectation game, like the solver.
    std::vector<double> x(m, 0.0), p(m, 0.0);
    for (const dynkin::Scenario& s : spec.scenario_set->scenarios)
      for (int k = 0; k < m; ++k) {
        x[k] += s.probability * s.exercise_payoff[k];
        p[k] += s.probability * s.terminal_payoff[k];
      }
    dynkin::SinglePeriodGame g(*spec.weights, x, p);
    rep = dynkin::analyze_single(g);
    solved = dynkin::solve_single_stochastic(*spec.scenario_set, *spec.weights);
  }

  bool agree = true;
  if (solved) {
    agree = values_agree(solved->value, rep.maximin, spec.tolerance) &&
            values_agree(solved->value, rep.minimax, spec.tolerance) &&
            rep.is_optimal(solved->active_set.bits());
  }

  if (opt.machine) {
    ordered_json out;
    out["kind"] = dynkin::io::kind_name(spec.kind);
    out["players"] = m;
    out["tolerance"] = full_precision(spec.tolerance);
    out["oracle"] = report_json(rep);
    if (solved) {
      out["solver_value"] = vec_json(solved->value);
      out["agreement"] = agree;
    }
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "kind: " << dynkin::io::kind_name(spec.kind) << "\n"
              << "players: " << m << "\n";
    print_report_summary(rep, ProfileStyle::ExerciseBits, std::cout);
    if (solved) {
      std::cout << "solver value: " << vec9(solved->value) << "\n"
                << "solver value = oracle maximin = minimax: "
                << (agree ? "yes" : "NO") << "\n"
                << "verdict: " << (agree ? "ok" : "solver/oracle disagreement") << "\n";
    }
  }
  return agree ? kExitOk : kExitNegative;
}

int verify_quitting_kind(const GameSpec& spec, const Options& opt) {
  const int m = spec.players;
  if (spec.stochastic_quitting) {
    const dynkin::EquilibriumReport rep =
        dynkin::analyze_quitting_stochastic(*spec.stochastic_quitting);
    if (opt.machine) {
      ordered_json out;
      out["kind"] = "quitting";
      out["stochastic"] = true;
      out["players"] = m;
      out["tolerance"] = full_precision(spec.tolerance);
      out["oracle"] = report_json(rep);
      std::cout << out.dump() << "\n";
    } else {
      std::cout << "kind: quitting (stochastic)\n"
                << "players: " << m << "\n";
      print_report_summary(rep, ProfileStyle::Times, std::cout);
    }
    return kExitOk;
  }

  const dynkin::QuittingSolveResult res = dynkin::solve_quitting(*spec.quitting);
  const dynkin::EquilibriumReport rep = dynkin::verify_quitting(*spec.quitting);
  std::vector<int> times = res.equilibrium.times;
  const std::uint64_t id = rep.encode(times);
  const bool saddle = rep.is_optimal(id);
  const bool agree = saddle && values_agree(res.value, rep.maximin, spec.tolerance) &&
                     values_agree(res.value, rep.minimax, spec.tolerance);

  if (opt.machine) {
    ordered_json out;
    out["kind"] = "quitting";
    out["stochastic"] = false;
    out["players"] = m;
    out["tolerance"] = full_precision(spec.tolerance);
    out["oracle"] = report_json(rep);
    out["solver_value"] = vec_json(res.value);
    out["solver_times"] = times;
    out["candidate_optimal"] = saddle;
    out["agreement"] = agree;
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "kind: quitting\n"
              << "players: " << m << "\n";
    print_report_summary(rep, ProfileStyle::Times, std::cout);
    std::cout << "solver value: " << vec9(res.value) << "\n"
              << "solver times: " << profile_string(times) << "\n"
              << "candidate passes saddle check: " << (saddle ? "yes" : "NO") << "\n"
              << "verdict: " << (agree ? "ok" : "solver/oracle disagreement") << "\n";
  }
  return agree ? kExitOk : kExitNegative;
}

int verify_stopping_kind(const GameSpec& spec, const Options& opt) {
  const dynkin::EventTree& tree = *spec.tree;
  if (spec.natural_variant) {
    const dynkin::EquilibriumReport rep =
        dynkin::analyze_natural_chain(tree, *spec.weights);
    const int distinct = rep.distinct_payoff_count(rep.nash, spec.tolerance);
    if (opt.machine) {
      ordered_json out;
      out["kind"] = "stopping";
      out["variant"] = "natural";
      out["players"] = spec.players;
      out["tolerance"] = full_precision(spec.tolerance);
      out["oracle"] = report_json(rep);
      out["distinct_nash_payoffs"] = distinct;
      std::cout << out.dump() << "\n";
    } else {
      std::cout << "kind: stopping (natural variant)\n"
                << "players: " << spec.players << "\n";
      print_report_summary(rep, ProfileStyle::Times, std::cout);
      std::cout << "distinct Nash payoffs: " << distinct << "\n";
    }
    return kExitOk;
  }

  const dynkin::ValueProcess u = dynkin::value_process(tree, *spec.weights);
  const dynkin::StoppingRule rule =
      dynkin::equilibrium_stopping(tree, u, spec.tolerance);
  const dynkin::PayoffVector replay =
      dynkin::evaluate_stopping_profile(tree, *spec.weights, rule, u);
  const bool replay_ok = values_agree(replay, u[tree.root()], spec.tolerance);
  const bool saddle =
      dynkin::verify_stopping_equilibrium(tree, *spec.weights, rule, u);
  const bool ok = replay_ok && saddle;

  if (opt.machine) {
    ordered_json out;
    out["kind"] = "stopping";
    out["variant"] = "value";
    out["players"] = spec.players;
    out["tolerance"] = full_precision(spec.tolerance);
    out["value"] = vec_json(u[tree.root()]);
    out["replay_matches_value"] = replay_ok;
    out["equilibrium_verified"] = saddle;
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "kind: stopping\n"
              << "players: " << spec.players << "\n"
              << "value: " << vec9(u[tree.root()]) << "\n"
              << "equilibrium payoff replays the value: " << (replay_ok ? "yes" : "NO")
              << "\n"
              << "exhaustive saddle check: " << (saddle ? "pass" : "FAIL") << "\n"
              << "verdict: " << (ok ? "ok" : "equilibrium check failed") << "\n";
  }
  return ok ? kExitOk : kExitNegative;
}

int cmd_verify(const GameSpec& spec, const Options& opt) {
  switch (spec.kind) {
    case GameKind::Single:
    case GameKind::Stochastic:
    case GameKind::RawWeights:
      return verify_single_kind(spec, opt);
    case GameKind::Quitting:
      return verify_quitting_kind(spec, opt);
    case GameKind::Stopping:
      return verify_stopping_kind(spec, opt);
  }
  return kExitInvalid;
}

// ---------------------------------------------------------------------------
// wuc

int cmd_wuc(const GameSpec& spec, const Options& opt) {
  const int m = spec.players;
  dynkin::RawWeightTable table =
      spec.raw_table ? *spec.raw_table
                     : dynkin::RawWeightTable::from_generators(spec.weights->generators());

  const std::optional<std::vector<double>> fit =
      dynkin::check_weight_form(table, spec.tolerance);

  bool positive = true;
  if (m >= 2) {
    const std::uint64_t full = (std::uint64_t{1} << m) - 1;
    for (std::uint64_t mask = 1; mask < full && positive; ++mask)
      for (int k = 0; k < m && positive; ++k)
        if (!((mask >> k) & 1u))
          positive = table.get(dynkin::ExerciseSet(mask), k) > 0.0;
  }

  // WUC for every payoff choice holds iff the canonical form fits; with two
  // players the growth condition is vacuous, so positivity already suffices.
  std::string verdict;
  bool violated = false;
  std::optional<dynkin::WucSearchResult> found;
  std::optional<dynkin::WucWitness> witness;

  std::vector<double> x = spec.raw_x, p = spec.raw_p;
  bool has_payoffs = spec.raw_has_payoffs;
  if (spec.single) {
    x = spec.single->exercise_payoff;
    p = spec.single->terminal_payoff;
    has_payoffs = true;
  }

  if (m == 1) {
    verdict = "vacuously yes";
  } else if (has_payoffs) {
    witness = dynkin::check_wuc(dynkin::OracleGame(table, x, p, spec.tolerance));
    violated = witness.has_value();
    verdict = violated ? "violated" : "yes";
  } else if (fit || (m == 2 && positive)) {
    verdict = "yes (for every X and P)";
  } else {
    found = dynkin::search_wuc_violation(table, opt.seed, 200, spec.tolerance);
    if (found) {
      violated = true;
      witness = found->witness;
      verdict = "violated";
    } else {
      verdict = "no violation found (search inconclusive)";
    }
  }

  if (opt.machine) {
    ordered_json out;
    out["players"] = m;
    out["tolerance"] = full_precision(spec.tolerance);
    if (fit)
      out["form_fit"] = vec_json(*fit);
    else
      out["form_fit"] = nullptr;
    out["wuc"] = violated ? "violated" : verdict;
    if (witness) {
      ordered_json wj;
      wj["deviator"] = witness->deviator + 1;
      wj["affected"] = witness->affected + 1;
      wj["exercisers"] = set_json(dynkin::ExerciseSet(witness->profile), m);
      wj["exercisers_alt"] = set_json(dynkin::ExerciseSet(witness->profile_alt), m);
      if (found) {
        wj["X"] = vec_json(found->exercise_payoff);
        wj["P"] = vec_json(found->terminal_payoff);
      }
      out["witness"] = std::move(wj);
    }
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "players: " << m << "\n";
    if (fit)
      std::cout << "form fit: a = " << vec9(*fit) << "\n";
    else
      std::cout << "form fit: none\n";
    std::cout << "WUC: " << verdict << "\n";
    if (witness) {
      std::cout << "witness: deviator " << (witness->deviator + 1) << " affects player "
                << (witness->affected + 1) << "; exercisers "
                << set_string(dynkin::ExerciseSet(witness->profile), m) << " vs "
                << set_string(dynkin::ExerciseSet(witness->profile_alt), m) << "\n";
      if (found)
        std::cout << "payoffs: X = " << vec9(found->exercise_payoff)
                  << ", P = " << vec9(found->terminal_payoff) << "\n";
    }
  }
  return violated ? kExitNegative : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  std::vector<std::string> positional;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "-h" || arg == "--help") {
      usage(std::cout);
      return kExitOk;
    } else if (arg == "--machine") {
      opt.machine = true;
    } else if (arg == "--tolerance" || arg == "--seed") {
      if (i + 1 >= argc) {
        std::cerr << "error: " << arg << " needs a value\n";
        return kExitInvalid;
      }
      const std::string value = argv[++i];
      try {
        if (arg == "--tolerance")
          opt.tolerance = std::stod(value);
        else
          opt.seed = std::stoull(value);
      } catch (const std::exception&) {
        std::cerr << "error: cannot parse " << arg << " value '" << value << "'\n";
        return kExitInvalid;
      }
    } else if (!arg.empty() && arg[0] == '-') {
      std::cerr << "error: unknown option '" << arg << "'\n";
      usage(std::cerr);
      return kExitInvalid;
    } else {
      positional.push_back(arg);
    }
  }
  if (positional.size() != 2) {
    usage(std::cerr);
    return kExitInvalid;
  }
  opt.command = positional[0];
  opt.path = positional[1];

  try {
    const GameSpec spec = dynkin::io::load_game_spec(opt.path, opt.tolerance);
    if (opt.command == "solve") return cmd_solve(spec, opt);
    if (opt.command == "verify") return cmd_verify(spec, opt);
    if (opt.command == "wuc") return cmd_wuc(spec, opt);
    std::cerr << "error: unknown command '" << opt.command << "'\n";
    usage(std::cerr);
    return kExitInvalid;
  } catch (const dynkin::InstanceTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTooLarge;
  } catch (const dynkin::io::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInvalid;
  }
}
