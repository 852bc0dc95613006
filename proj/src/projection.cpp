#include "dynkin/projection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

namespace dynkin {
namespace {

void require_size(const std::vector<double>& v, int m, const char* what) {
  if (static_cast<int>(v.size()) != m)
    throw std::invalid_argument(std::string(what) + " must have one entry per player");
}

}  // namespace

double inner_product(const std::vector<double>& x, const std::vector<double>& y,
                     const WeightSystem& w) {
  const int m = w.players();
  require_size(x, m, "x");
  require_size(y, m, "y");
  if (w.regime() == Regime::Saturated)
    throw std::invalid_argument("inner product is undefined in the saturated regime");
  double dot = 0.0, sx = 0.0, sy = 0.0;
  for (int i = 0; i < m; ++i) {
    dot += x[i] * y[i] / w.generator(i);
    sx += x[i];
    sy += y[i];
  }
  return dot + sx * sy / (1.0 - w.generator_sum());
}

PayoffVector project_hyperplane(const std::vector<double>& p, ExerciseSet e,
                                const std::vector<double>& x,
                                const WeightSystem& w) {
  const int m = w.players();
  require_size(p, m, "p");
  require_size(x, m, "x");
  if (e.is_full(m)) return x;
  PayoffVector v = p;
  if (e.empty()) return v;
  double d = 0.0;
  for (int i = 0; i < m; ++i)
    if (e.contains(i)) d += x[i] - p[i];
  for (int k = 0; k < m; ++k) {
    if (e.contains(k))
      v[k] = x[k];
    else
      v[k] = p[k] - weight(w, e, k) * d;
  }
  return v;
}

OrthantProjection project_orthant(const std::vector<double>& p,
                                  const OrthantSpec& o, const WeightSystem& w) {
  std::vector<int> order(w.players());
  std::iota(order.begin(), order.end(), 0);
  return project_orthant(p, o, w, order);
}

OrthantProjection project_orthant(const std::vector<double>& p,
                                  const OrthantSpec& o, const WeightSystem& w,
                                  const std::vector<int>& elimination_order) {
  const int m = w.players();
  require_size(p, m, "p");
  require_size(o.lower_bounds, m, "lower bounds");
  if (static_cast<int>(elimination_order.size()) != m)
    throw std::invalid_argument("elimination order must be a permutation of the players");
  const double tol = w.tolerance();
  ExerciseSet active;
  for (;;) {
    PayoffVector v = project_hyperplane(p, active, o.lower_bounds, w);
    int next = -1;
    for (int k : elimination_order) {
      if (!active.contains(k) && v[k] <= o.lower_bounds[k] + tol) {
        next = k;
        break;
      }
    }
    if (next < 0) return {std::move(v), active};
    active.add(next);
  }
}

namespace {

struct Candidate {
  double distance = std::numeric_limits<double>::infinity();
  std::uint64_t mask = 0;
  bool valid = false;
};

// Total order on candidates: distance, then fewer exercisers, then mask.
bool better(const Candidate& a, const Candidate& b) {
  if (!b.valid) return a.valid;
  if (!a.valid) return false;
  if (a.distance != b.distance) return a.distance < b.distance;
  const int ca = __builtin_popcountll(a.mask), cb = __builtin_popcountll(b.mask);
  if (ca != cb) return ca < cb;
  return a.mask < b.mask;
}

// Allocation-free scan of a contiguous mask range. The candidate payoff for
// mask E is evaluated coordinate-by-coordinate; distances use the weighted
// norm (strict) or the diagonal norm on the constant-sum hyperplane.
Candidate scan_range(std::uint64_t begin, std::uint64_t end,
                     const std::vector<double>& p, const OrthantSpec& o,
                     const WeightSystem& w) {
  const int m = w.players();
  const double tol = w.tolerance();
  const bool saturated = w.regime() == Regime::Saturated;
  const std::vector<double>& x = o.lower_bounds;
  Candidate best;
  for (std::uint64_t mask = begin; mask < end; ++mask) {
    double d = 0.0, denom = 1.0;
    for (int i = 0; i < m; ++i) {
      if ((mask >> i) & 1u) {
        d += x[i] - p[i];
        denom -= w.generator(i);
      }
    }
    const bool all = mask + 1 == (std::uint64_t{1} << m);
    bool feasible = true;
    double dist = 0.0, sum_r = 0.0;
    for (int i = 0; i < m && feasible; ++i) {
      const double vi =
          ((mask >> i) & 1u) ? x[i] : (all ? x[i] : p[i] - w.generator(i) / denom * d);
      if (vi < x[i] - tol) {
        feasible = false;
        break;
      }
      const double ri = vi - p[i];
      dist += ri * ri / w.generator(i);
      sum_r += ri;
    }
    if (!feasible) continue;
    if (saturated) {
      if (std::abs(sum_r) > tol) continue;  // off the constant-sum hyperplane
    } else {
      dist += sum_r * sum_r / (1.0 - w.generator_sum());
    }
    Candidate c{dist, mask, true};
    if (better(c, best)) best = c;
  }
  return best;
}

}  // namespace

OrthantProjection project_orthant_exhaustive(const std::vector<double>& p,
                                             const OrthantSpec& o,
                                             const WeightSystem& w, Exec exec) {
  const int m = w.players();
  require_size(p, m, "p");
  require_size(o.lower_bounds, m, "lower bounds");
  if (m > 20) throw InstanceTooLarge("exhaustive orthant projection is limited to 20 players");
  const std::uint64_t total = std::uint64_t{1} << m;

  Candidate best;
  if (exec == Exec::Serial || total < 1024) {
    best = scan_range(0, total, p, o, w);
  } else {
    const std::int64_t chunks = 256;
    const std::uint64_t step = total / chunks;
#pragma omp parallel
    {
      Candidate local;
#pragma omp for schedule(static) nowait
      for (std::int64_t c = 0; c < chunks; ++c) {
        const std::uint64_t lo = static_cast<std::uint64_t>(c) * step;
        const std::uint64_t hi = c + 1 == chunks ? total : lo + step;
        Candidate cand = scan_range(lo, hi, p, o, w);
        if (better(cand, local)) local = cand;
      }
#pragma omp critical
      if (better(local, best)) best = local;
    }
  }

  // No feasible constant-sum candidate: everyone exercises.
  if (!best.valid)
    return {o.lower_bounds, ExerciseSet::full(m)};
  const ExerciseSet e(best.mask);
  return {project_hyperplane(p, e, o.lower_bounds, w), e};
}

}  // namespace dynkin
