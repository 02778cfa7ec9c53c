#include "mmot/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "mmot/errors.hpp"
#include "mmot/multiset.hpp"

namespace mmot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> clamp_small_negatives(std::span<const double> w, double tol) {
  std::vector<double> out(w.begin(), w.end());
  for (double& x : out) {
    if (x < 0.0) {
      if (x < -tol) throw NumericalBreakdown("solver produced a negative weight");
      x = 0.0;
    }
  }
  return out;
}

void check_budget(std::uint64_t vars, std::uint64_t budget) {
  if (vars > budget) {
    throw BudgetError("problem needs " + std::to_string(vars) + " variables, budget is " +
                      std::to_string(budget) + "; reduce the support size m or the body count N");
  }
}

}  // namespace

double pairs_of(int n) { return 0.5 * n * (n - 1.0); }

SolveReport solve_mmot(const DiscreteMeasure& mu, int n, const CostFunction& c,
                       const MmotOptions& opts) {
  if (n < 2) throw DomainError("solve_mmot: need N >= 2");
  const auto t0 = std::chrono::steady_clock::now();
  const int m = static_cast<int>(mu.size());
  const std::uint64_t nvars = multiset::count(m, n);
  check_budget(nvars, opts.variable_budget);

  lp::LinearProgram prog(m + 1, static_cast<int>(nvars));
  std::vector<int> counts(m);
  multiset::first(counts, n);
  int col = 0;
  bool any_infinite = false;
  do {
    const double cost = multiset_pair_cost(c, *mu.grid(), counts);
    prog.objective(col, cost);
    any_infinite = any_infinite || std::isinf(cost);
    for (int i = 0; i < m; ++i) {
      if (counts[i] > 0) prog.coefficient(i, col, static_cast<double>(counts[i]) / n);
    }
    prog.coefficient(m, col, 1.0);
    ++col;
  } while (multiset::next(counts));
  for (int i = 0; i < m; ++i) prog.rhs(i, mu.weight(i));
  prog.rhs(m, 1.0);

  const auto res = lp::solve(prog, opts.lp);

  SolveReport report;
  report.bodies = n;
  report.formulation = Formulation::direct;
  report.lp_stats = {prog.rows(), prog.cols(), res.iterations, res.status};

  if (res.status == lp::Status::infeasible) {
    if (!any_infinite) throw NumericalBreakdown("solve_mmot: unexpected infeasibility");
    report.infinite = true;
    report.value_per_pair = kInf;
    report.total_cost = kInf;
  } else if (res.status == lp::Status::unbounded) {
    throw NumericalBreakdown("solve_mmot: unexpected unbounded status");
  } else {
    report.total_cost = res.objective;
    report.value_per_pair = res.objective / pairs_of(n);
    auto weights = clamp_small_negatives(res.primal, 10 * opts.lp.tol_feasibility);
    NBodyMeasure gamma(mu.grid(), n, Mode::multiset, std::move(weights), opts.variable_budget);
    // contract checks: the returned measure reproduces mu and the value
    const double recomputed = nbody_cost(c, gamma);
    if (std::abs(recomputed - res.objective) > 1e-9 * (1.0 + std::abs(res.objective))) {
      throw NumericalBreakdown("solve_mmot: objective does not match the returned measure");
    }
    if (tv_distance(marginal1(gamma), mu) > 10 * m * opts.lp.tol_feasibility) {
      throw NumericalBreakdown("solve_mmot: returned measure violates the marginal");
    }
    report.optimal_pair = marginal2(gamma);
    report.optimal_nbody = std::move(gamma);
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

SolveReport solve_reduced(const DiscreteMeasure& mu, int n, const CostFunction& c,
                          const MmotOptions& opts) {
  if (n < 2) throw DomainError("solve_reduced: need N >= 2");
  const auto t0 = std::chrono::steady_clock::now();
  const int m = static_cast<int>(mu.size());
  const int npairs = m * (m + 1) / 2;
  const std::uint64_t nmulti = multiset::count(m, n);
  check_budget(nmulti + npairs, opts.variable_budget);

  // columns: unordered pair masses first, then the multiset block
  const int rows = m + npairs + 1;
  lp::LinearProgram prog(rows, npairs + static_cast<int>(nmulti));

  auto pair_index = [m](int i, int j) {  // i <= j
    return i * m - i * (i - 1) / 2 + (j - i);
  };

  bool any_infinite = false;
  {
    int u = 0;
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j, ++u) {
        const double v = c.pair_value(*mu.grid(), i, j);
        prog.objective(u, v);
        any_infinite = any_infinite || std::isinf(v);
        // marginal rows: p_ii + (1/2) sum_{j != i} p_{ij} = mu_i
        if (i == j) {
          prog.coefficient(i, u, 1.0);
        } else {
          prog.coefficient(i, u, 0.5);
          prog.coefficient(j, u, 0.5);
        }
        // linking row: p_U - sum_M h_{U,M} w_M = 0
        prog.coefficient(m + u, u, 1.0);
      }
    }
  }

  const double denom = pairs_of(n);
  std::vector<int> counts(m);
  multiset::first(counts, n);
  int col = npairs;
  do {
    for (int i = 0; i < m; ++i) {
      if (counts[i] == 0) continue;
      if (counts[i] >= 2) {
        prog.coefficient(m + pair_index(i, i), col,
                         -counts[i] * (counts[i] - 1.0) / 2.0 / denom);
      }
      for (int j = i + 1; j < m; ++j) {
        if (counts[j] == 0) continue;
        prog.coefficient(m + pair_index(i, j), col,
                         -static_cast<double>(counts[i]) * counts[j] / denom);
      }
    }
    prog.coefficient(rows - 1, col, 1.0);
    ++col;
  } while (multiset::next(counts));

  for (int i = 0; i < m; ++i) prog.rhs(i, mu.weight(i));
  prog.rhs(rows - 1, 1.0);

  const auto res = lp::solve(prog, opts.lp);

  SolveReport report;
  report.bodies = n;
  report.formulation = Formulation::reduced;
  report.lp_stats = {prog.rows(), prog.cols(), res.iterations, res.status};

  if (res.status == lp::Status::infeasible) {
    if (!any_infinite) throw NumericalBreakdown("solve_reduced: unexpected infeasibility");
    report.infinite = true;
    report.value_per_pair = kInf;
    report.total_cost = kInf;
  } else if (res.status == lp::Status::unbounded) {
    throw NumericalBreakdown("solve_reduced: unexpected unbounded status");
  } else {
    report.value_per_pair = res.objective;
    report.total_cost = res.objective * pairs_of(n);
    std::vector<double> upper(res.primal.begin(), res.primal.begin() + npairs);
    upper = clamp_small_negatives(upper, 10 * opts.lp.tol_feasibility);
    auto pair = PairMeasure::from_unordered(mu.grid(), upper);
    std::vector<double> wmulti(res.primal.begin() + npairs, res.primal.end());
    wmulti = clamp_small_negatives(wmulti, 10 * opts.lp.tol_feasibility);
    NBodyMeasure witness(mu.grid(), n, Mode::multiset, std::move(wmulti), opts.variable_budget);
    if (tv_distance(marginal2(witness), pair) > 100 * m * opts.lp.tol_feasibility) {
      throw NumericalBreakdown("solve_reduced: witness does not reproduce the pair measure");
    }
    report.optimal_pair = std::move(pair);
    report.optimal_nbody = std::move(witness);
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

double mean_field_value(const DiscreteMeasure& mu, const CostFunction& c) {
  return pair_cost_integral(c, tensor_pair(mu, mu));
}

double sce_value(const DiscreteMeasure& mu, int n, const CostFunction& c,
                 const MmotOptions& opts) {
  const auto report = solve_mmot(mu, n, c, opts);
  if (report.infinite) return kInf;
  return report.total_cost;
}

}  // namespace mmot
