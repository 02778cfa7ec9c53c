#pragma once

#include <optional>

#include "mmot/cost.hpp"
#include "mmot/lp.hpp"
#include "mmot/measure.hpp"

namespace mmot {

enum class Formulation { direct, reduced };

struct MmotOptions {
  std::uint64_t variable_budget = kDefaultBudget;
  lp::Options lp;
};

struct LpStats {
  int rows = 0;
  int cols = 0;
  int iterations = 0;
  lp::Status status = lp::Status::optimal;
};

// Result of one symmetric N-marginal transport solve. value_per_pair is the
// optimal cost divided by C(N,2); total_cost is the undivided optimum. When
// a singular cost forces every feasible configuration through an infinite
// coefficient the value is +infinity and `infinite` is set instead of a
// measure being returned. Only the optimal value and feasibility of the
// returned measure are contractual; vertex tie-breaking is solver-defined.
struct SolveReport {
  int bodies = 0;
  Formulation formulation = Formulation::direct;
  double value_per_pair = 0.0;
  double total_cost = 0.0;
  bool infinite = false;
  std::optional<NBodyMeasure> optimal_nbody;
  std::optional<PairMeasure> optimal_pair;
  LpStats lp_stats;
  double wall_seconds = 0.0;
};

// Direct formulation: one LP variable per size-N multiset of support points
// (orbit mass), marginal rows with coefficients counts/N, cost coefficients
// from within-multiset pair counts.
SolveReport solve_mmot(const DiscreteMeasure& mu, int n, const CostFunction& c,
                       const MmotOptions& opts = {});

// Reduced formulation: minimize the pair integral over symmetric pair
// measures with marginal mu, with N-representability imposed through an
// embedded multiset block. Agrees with solve_mmot to 1e-8 by construction.
SolveReport solve_reduced(const DiscreteMeasure& mu, int n, const CostFunction& c,
                          const MmotOptions& opts = {});

// Infinite-body optimum for nonnegative-spectrum costs: the pair integral
// against mu (x) mu. May be +infinity (singular cost on atoms).
double mean_field_value(const DiscreteMeasure& mu, const CostFunction& c);

// C(N,2) * value_per_pair for the one-body profile mu = rho/N.
double sce_value(const DiscreteMeasure& mu, int n, const CostFunction& c,
                 const MmotOptions& opts = {});

double pairs_of(int n);  // C(n,2) as double

}  // namespace mmot
