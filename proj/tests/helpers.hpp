#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "mmot/cost.hpp"
#include "mmot/measure.hpp"
#include "mmot/multiset.hpp"

namespace th {

inline mmot::GridPtr line(std::vector<double> coords) {
  return mmot::make_line_grid(std::move(coords));
}

inline mmot::GridPtr grid01() { return line({0.0, 1.0}); }

inline mmot::DiscreteMeasure uniform01() {
  return mmot::DiscreteMeasure::uniform(grid01());
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) {
    x = -std::log(std::max(unit(rng), 1e-300));
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

inline mmot::DiscreteMeasure random_measure(std::mt19937_64& rng, const mmot::GridPtr& g) {
  return mmot::DiscreteMeasure(g, random_simplex(rng, g->size()));
}

inline mmot::NBodyMeasure random_exchangeable(std::mt19937_64& rng, const mmot::GridPtr& g,
                                              int n) {
  return mmot::NBodyMeasure(
      g, n, mmot::Mode::multiset,
      random_simplex(rng, mmot::multiset::count(static_cast<int>(g->size()), n)));
}

// Independent brute-force oracle for the symmetric N-marginal optimum on a
// two-point support {x0, x1} with marginal (1 - mu1, mu1). The feasible
// orbit-mass vectors satisfy two equality constraints, so optima sit on
// supports of size <= 2; enumerate them and solve each 2x2 system directly.
// ell00/ell01/ell11 are the three pair values. Works with plain loops; no
// solver or measure machinery involved.
inline double two_point_oracle(double mu1, int n, double ell00, double ell01, double ell11) {
  auto config_cost = [&](int k) {  // k = bodies at x1
    const double same1 = k * (k - 1.0) / 2.0;
    const double same0 = (n - k) * (n - k - 1.0) / 2.0;
    return same1 * ell11 + same0 * ell00 + static_cast<double>(k) * (n - k) * ell01;
  };
  const double target = n * mu1;  // sum_k k w_k
  const double pairs = n * (n - 1.0) / 2.0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= n; ++k) {
    if (std::abs(k - target) < 1e-12) best = std::min(best, config_cost(k) / pairs);
  }
  for (int k1 = 0; k1 <= n; ++k1) {
    for (int k2 = k1 + 1; k2 <= n; ++k2) {
      const double w1 = (k2 - target) / static_cast<double>(k2 - k1);
      const double w2 = 1.0 - w1;
      if (w1 < -1e-12 || w1 > 1.0 + 1e-12) continue;
      best = std::min(best, (w1 * config_cost(k1) + w2 * config_cost(k2)) / pairs);
    }
  }
  return best;
}

constexpr double kE1 = 0.36787944117144233;  // exp(-1)

}  // namespace th
