#pragma once

#include <optional>
#include <vector>

#include "mmot/cost.hpp"
#include "mmot/measure.hpp"
#include "mmot/solver.hpp"

namespace mmot {

// Outcome of the N-representability feasibility query for a symmetric pair
// measure. Feasible answers carry a representing N-body witness; infeasible
// answers carry a Farkas certificate for the (row-normalized) constraint
// system, verifiable with verify_representability_certificate. Certificates
// with margin below 10 * tol_farkas are flagged numerically marginal rather
// than trusted.
struct RepresentabilityAnswer {
  bool feasible = false;
  int bodies = 0;
  std::optional<NBodyMeasure> witness;
  std::vector<double> farkas;      // length m(m+1)/2 + 1 (pair rows + normalization)
  double farkas_margin = 0.0;
  bool numerically_marginal = false;
  LpStats lp_stats;
};

struct RepresentabilityOptions {
  std::uint64_t variable_budget = kDefaultBudget;
  lp::Options lp;
};

RepresentabilityAnswer is_n_representable(const PairMeasure& mu2, int n,
                                          const RepresentabilityOptions& opts = {});

// Rebuilds the scaled constraint system and checks y.A <= tol componentwise
// and y.b > 0 (margin returned). Independent of the solve path.
bool verify_representability_certificate(const PairMeasure& mu2, int n,
                                         std::span<const double> farkas, double tol,
                                         double* margin_out = nullptr);

// Checks the implication "N-representable => M-representable" (M <= N) by
// solving both queries; implication_holds is false only on a counterexample,
// which would indicate a solver defect.
struct MonotonicityVerdict {
  bool n_representable = false;
  bool m_representable = false;
  bool implication_holds = true;
};
MonotonicityVerdict monotonicity_check(const PairMeasure& mu2, int n, int m,
                                       const RepresentabilityOptions& opts = {});

// C(N,2) * min integral of c over k-representable pair measures with
// marginal mu. Nondecreasing in k; equals sce_value at k = N; k > N allowed.
double hierarchy_value(const DiscreteMeasure& mu, int n, int k, const CostFunction& c,
                       const MmotOptions& opts = {});

struct ProbeResult {
  bool representable_up_to_k_max = true;
  int refuted_at = 0;  // first k with an infeasible query, when refuted
  std::vector<RepresentabilityAnswer> answers;
};

// Runs is_n_representable for k = 2..k_max and reports the first refutation.
ProbeResult infinite_representability_probe(const PairMeasure& mu2, int k_max,
                                            const RepresentabilityOptions& opts = {});

}  // namespace mmot
