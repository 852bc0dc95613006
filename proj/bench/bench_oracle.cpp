// Times the enumeration kernels serially and under OpenMP and reports the
// speedup. The parallel paths must return identical results, which is
// checked here on every run.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dynkin/game.hpp"
#include "dynkin/oracle.hpp"
#include "dynkin/projection.hpp"

using namespace dynkin;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SinglePeriodGame random_game(std::mt19937_64& rng, int m, double sum) {
  std::exponential_distribution<double> exp1(1.0);
  std::uniform_real_distribution<double> payoff(-10.0, 10.0);
  std::vector<double> a(m), x(m), p(m);
  double total = 0.0;
  for (double& v : a) {
    v = exp1(rng);
    total += v;
  }
  for (double& v : a) v = v / total * sum;
  for (double& v : x) v = payoff(rng);
  for (double& v : p) v = payoff(rng);
  return SinglePeriodGame(WeightSystem(std::move(a)), std::move(x), std::move(p));
}

struct Timing {
  double serial = 0.0;
  double parallel = 0.0;
};

void report(const char* name, const Timing& t) {
  std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %.2fx\n", name,
              t.serial, t.parallel, t.parallel > 0 ? t.serial / t.parallel : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
  int m = 14;
  int reps = 3;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--players" && i + 1 < argc) {
      m = std::atoi(argv[++i]);
    } else if (arg == "--reps" && i + 1 < argc) {
      reps = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: bench_oracle [--players m] [--reps n]\n");
      return 2;
    }
  }
  if (m < 2 || m > 15) {
    std::fprintf(stderr, "players must lie in 2..15\n");
    return 2;
  }

#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; parallel paths run serially\n");
#endif
  std::printf("players: %d, reps: %d\n\n", m, reps);

  std::mt19937_64 rng(2024);
  Timing analyze, project;
  for (int rep = 0; rep < reps; ++rep) {
    SinglePeriodGame g = random_game(rng, m, rep % 2 ? 1.0 : 0.5);
    OracleGame og(g);

    auto start = std::chrono::steady_clock::now();
    EquilibriumReport serial = analyze_single(og, Exec::Serial);
    analyze.serial += seconds_since(start);

    start = std::chrono::steady_clock::now();
    EquilibriumReport parallel = analyze_single(og, Exec::Parallel);
    analyze.parallel += seconds_since(start);

    if (serial.payoffs != parallel.payoffs || serial.nash != parallel.nash ||
        serial.maximin != parallel.maximin || serial.minimax != parallel.minimax) {
      std::fprintf(stderr, "FAIL: parallel analyze_single diverged from serial\n");
      return 1;
    }

    const int proj_m = std::min(m + 5, 20);
    SinglePeriodGame big = random_game(rng, proj_m, rep % 2 ? 1.0 : 0.5);
    const OrthantSpec orthant{big.exercise_payoff};

    start = std::chrono::steady_clock::now();
    OrthantProjection ps = project_orthant_exhaustive(big.terminal_payoff, orthant,
                                                      big.weights, Exec::Serial);
    project.serial += seconds_since(start);

    start = std::chrono::steady_clock::now();
    OrthantProjection pp = project_orthant_exhaustive(big.terminal_payoff, orthant,
                                                      big.weights, Exec::Parallel);
    project.parallel += seconds_since(start);

    if (ps.point != pp.point || !(ps.active == pp.active)) {
      std::fprintf(stderr, "FAIL: parallel projection scan diverged from serial\n");
      return 1;
    }
  }

  report("analyze_single", analyze);
  report("project_orthant_exhaustive", project);
  std::printf("\nparallel results identical to serial: yes\n");
  return 0;
}
