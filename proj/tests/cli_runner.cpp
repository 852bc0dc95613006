// Drives the CLI binary against the bundled game files and compares output
// and exit codes with the committed expectations. Usage:
//   cli_runner <path-to-dynkin-binary> <games-dir>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr combined
};

RunResult run(const std::string& command) {
  RunResult result;
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  if (!pipe) {
    std::cerr << "failed to spawn: " << command << "\n";
    std::exit(1);
  }
  std::array<char, 4096> buf{};
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    result.output.append(buf.data(), got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "missing expected-output file: " << path << "\n";
    std::exit(1);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int checks = 0, bad = 0;

void expect(bool ok, const std::string& what, const std::string& detail = {}) {
  ++checks;
  if (!ok) {
    ++bad;
    std::cerr << "FAIL: " << what << "\n";
    if (!detail.empty()) std::cerr << detail << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: cli_runner <dynkin-binary> <games-dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const std::string dir = argv[2];

  struct Case {
    std::string args;     // command + file (relative to games dir)
    std::string expected; // expected-output file under games/expected/
    int exit_code;
  };
  const std::vector<Case> cases = {
      {"solve single_basic.json", "single_basic.solve.txt", 0},
      {"solve single_basic.json --machine", "single_basic.solve.machine.txt", 0},
      {"solve single_saturated.json", "single_saturated.solve.txt", 0},
      {"solve stochastic_pair.json", "stochastic_pair.solve.txt", 0},
      {"solve quitting_worked.json", "quitting_worked.solve.txt", 0},
      {"solve quitting_worked.json --machine", "quitting_worked.solve.machine.txt", 0},
      {"solve stopping_chain.json", "stopping_chain.solve.txt", 0},
      {"verify single_basic.json", "single_basic.verify.txt", 0},
      {"verify stochastic_pair.json", "stochastic_pair.verify.txt", 0},
      {"verify quitting_worked.json", "quitting_worked.verify.txt", 0},
      {"verify stopping_chain.json", "stopping_chain.verify.txt", 0},
      {"verify no_pure_equilibrium.json", "no_pure_equilibrium.verify.txt", 0},
      {"verify natural_variant_two_nash.json", "natural_variant_two_nash.verify.txt", 0},
      {"verify stochastic_quitting_no_pure_nash.json", "stochastic_quitting_no_pure_nash.verify.txt",
       0},
      {"wuc single_basic.json", "single_basic.wuc.txt", 0},
      {"wuc no_pure_equilibrium.json", "no_pure_equilibrium.wuc.txt", 0},
      {"wuc misfit_pair.json", "misfit_pair.wuc.txt", 0},
      {"wuc misfit_triple.json", "misfit_triple.wuc.txt", 1},
  };

  for (const Case& c : cases) {
    const RunResult r = run(cli + " " + c.args.substr(0, c.args.find(' ')) + " " + dir +
                            "/" + c.args.substr(c.args.find(' ') + 1));
    const std::string want = slurp(dir + "/expected/" + c.expected);
    expect(r.exit_code == c.exit_code,
           c.args + ": exit code " + std::to_string(r.exit_code) + ", expected " +
               std::to_string(c.exit_code));
    expect(r.output == want, c.args + ": output differs from expected/" + c.expected,
           "---- got ----\n" + r.output + "---- want ----\n" + want);
  }

  // Determinism: repeated runs are byte-identical (machine mode).
  {
    const std::string cmd = cli + " solve " + dir + "/quitting_worked.json --machine";
    expect(run(cmd).output == run(cmd).output, "machine output round trip");
  }

  // Malformed inputs exit with code 2 and name the problem.
  {
    const RunResult r = run(cli + " solve " + dir + "/invalid/oversaturated.json");
    expect(r.exit_code == 2, "oversaturated generators exit code");
    expect(r.output.find("sum to at most 1") != std::string::npos,
           "oversaturated generators message", r.output);
    const RunResult r2 = run(cli + " solve " + dir + "/invalid/bad_json.json");
    expect(r2.exit_code == 2, "syntax error exit code");
    const RunResult r3 = run(cli + " solve " + dir + "/invalid/missing.json");
    expect(r3.exit_code == 2, "missing file exit code");
    // Kinds without a pure-strategy solver are solve-rejected.
    const RunResult r4 = run(cli + " solve " + dir + "/no_pure_equilibrium.json");
    expect(r4.exit_code == 2, "raw-weights solve rejection");
    const RunResult r5 = run(cli + " solve " + dir + "/stochastic_quitting_no_pure_nash.json");
    expect(r5.exit_code == 2, "stochastic quitting solve rejection");
    const RunResult r6 = run(cli + " solve " + dir + "/natural_variant_two_nash.json");
    expect(r6.exit_code == 2, "natural variant solve rejection");
  }

  // Oversized oracle instances exit with code 3.
  {
    const RunResult r = run(cli + " verify " + dir + "/invalid/oversized_quitting.json");
    expect(r.exit_code == 3, "oversized instance exit code", r.output);
  }

  // Unknown options are rejected.
  {
    const RunResult r = run(cli + " solve " + dir + "/single_basic.json --frobnicate");
    expect(r.exit_code == 2, "unknown option exit code");
  }

  // --tolerance reclassifies boundary players.
  {
    std::ofstream out(dir + "/invalid/.tolerance_probe.json", std::ios::binary);
    out << R"({"kind": "single", "a": [0.25, 0.25], "X": [0, 0], "P": [1e-6, 3]})";
    out.close();
    const std::string probe = dir + "/invalid/.tolerance_probe.json";
    const RunResult strict = run(cli + " solve " + probe);
    const RunResult loose = run(cli + " solve " + probe + " --tolerance 1e-3");
    expect(strict.output.find("exercisers: {}") != std::string::npos,
           "tolerance default leaves the boundary player in", strict.output);
    expect(loose.output.find("exercisers: {1}") != std::string::npos,
           "tolerance flag pulls the boundary player out", loose.output);
    std::remove(probe.c_str());
  }

  if (bad == 0) {
    std::cout << checks << " CLI checks passed\n";
    return 0;
  }
  std::cerr << bad << " of " << checks << " CLI checks failed\n";
  return 1;
}
