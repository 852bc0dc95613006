// Weighted inner-product geometry behind the value construction: payoffs as
// hyperplane projections, and the orthant projection computed by player
// elimination. Works in both regimes; the saturated case follows the
// penalty-limit convention without ever forming the (undefined) norm.
#pragma once

#include <vector>

#include "dynkin/game.hpp"

namespace dynkin {

// Execution policy for the brute-force scans. Parallel paths must return
// bit-identical results to the serial reference.
enum class Exec { Serial, Parallel };

struct OrthantSpec {
  std::vector<double> lower_bounds;  // the exercise payoffs X
};

// Strict regime only: sum x_i y_i / a_i + (sum x)(sum y) / (1 - sum a).
double inner_product(const std::vector<double>& x, const std::vector<double>& y,
                     const WeightSystem& w);

// Closed-form projection of p onto the hyperplane fixing coordinates in e at
// the exercise payoffs. This is exactly the payoff vector of the profile
// with exercise set e, so it is defined in both regimes.
PayoffVector project_hyperplane(const std::vector<double>& p, ExerciseSet e,
                                const std::vector<double>& x,
                                const WeightSystem& w);

struct OrthantProjection {
  PayoffVector point;
  ExerciseSet active;  // coordinates clamped to the lower bounds
};

// Projection of p onto {x_i >= lower_bounds_i} by repeated elimination:
// while some free coordinate sits at or below its bound (within tolerance),
// clamp the first such coordinate and recompute. At most m rounds. The
// order-parameterised overload exists so tests can verify that the value
// does not depend on the elimination order.
OrthantProjection project_orthant(const std::vector<double>& p,
                                  const OrthantSpec& o, const WeightSystem& w);
OrthantProjection project_orthant(const std::vector<double>& p,
                                  const OrthantSpec& o, const WeightSystem& w,
                                  const std::vector<int>& elimination_order);

// Independent oracle: scan all 2^m exercise sets, keep the feasible
// candidates and return the one closest to p (weighted norm in the strict
// regime; in the saturated regime the constant-sum hyperplane is enforced
// and the diagonal norm is used). Ties break toward fewer exercisers, then
// the smaller bitmask. Guarded at m <= 20.
OrthantProjection project_orthant_exhaustive(const std::vector<double>& p,
                                             const OrthantSpec& o,
                                             const WeightSystem& w,
                                             Exec exec = Exec::Parallel);

}  // namespace dynkin
