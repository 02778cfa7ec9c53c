#include "mmot/representability.hpp"

#include <cmath>

#include "mmot/errors.hpp"
#include "mmot/multiset.hpp"

namespace mmot {

namespace {

// Constraint system of the representability query on multiset variables:
// for each unordered pair U, sum_M h_{U,M} w_M = mu2(U); plus sum_M w_M = 1.
// Rows are scaled to unit Euclidean norm (degenerate geometry conditions
// badly otherwise); the scaling vector is reproducible from (m, n) alone, so
// certificates stay verifiable.
struct RepSystem {
  lp::LinearProgram prog;
  std::vector<double> row_scale;
};

RepSystem build_system(const PairMeasure& mu2, int n) {
  const int m = static_cast<int>(mu2.points());
  const int npairs = m * (m + 1) / 2;
  const std::uint64_t nmulti = multiset::count(m, n);
  const int rows = npairs + 1;

  auto pair_index = [m](int i, int j) { return i * m - i * (i - 1) / 2 + (j - i); };
  const double denom = pairs_of(n);

  std::vector<std::vector<double>> dense_rows(rows, std::vector<double>(nmulti, 0.0));
  std::vector<int> counts(m);
  multiset::first(counts, n);
  std::uint64_t col = 0;
  do {
    for (int i = 0; i < m; ++i) {
      if (counts[i] == 0) continue;
      if (counts[i] >= 2) {
        dense_rows[pair_index(i, i)][col] = counts[i] * (counts[i] - 1.0) / 2.0 / denom;
      }
      for (int j = i + 1; j < m; ++j) {
        if (counts[j] == 0) continue;
        dense_rows[pair_index(i, j)][col] = static_cast<double>(counts[i]) * counts[j] / denom;
      }
    }
    dense_rows[rows - 1][col] = 1.0;
    ++col;
  } while (multiset::next(counts));

  std::vector<double> rhs(rows);
  {
    int u = 0;
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j, ++u) rhs[u] = mu2.unordered_mass(i, j);
    }
    rhs[rows - 1] = 1.0;
  }

  RepSystem sys{lp::LinearProgram(rows, static_cast<int>(nmulti)), std::vector<double>(rows, 1.0)};
  for (int r = 0; r < rows; ++r) {
    double norm2 = 0.0;
    for (const double v : dense_rows[r]) norm2 += v * v;
    const double scale = norm2 > 0.0 ? 1.0 / std::sqrt(norm2) : 1.0;
    sys.row_scale[r] = scale;
    for (std::uint64_t c2 = 0; c2 < nmulti; ++c2) {
      if (dense_rows[r][c2] != 0.0) {
        sys.prog.coefficient(r, static_cast<int>(c2), dense_rows[r][c2] * scale);
      }
    }
    sys.prog.rhs(r, rhs[r] * scale);
  }
  return sys;
}

}  // namespace

RepresentabilityAnswer is_n_representable(const PairMeasure& mu2, int n,
                                          const RepresentabilityOptions& opts) {
  if (n < 2) throw DomainError("is_n_representable: need N >= 2");
  if (!mu2.is_symmetric()) throw DomainError("is_n_representable: pair measure must be symmetric");
  const int m = static_cast<int>(mu2.points());
  const std::uint64_t nmulti = multiset::count(m, n);
  if (nmulti > opts.variable_budget) {
    throw BudgetError("representability query needs " + std::to_string(nmulti) +
                      " variables; reduce m or N");
  }

  auto sys = build_system(mu2, n);
  const auto res = lp::solve(sys.prog, opts.lp);

  RepresentabilityAnswer out;
  out.bodies = n;
  out.lp_stats = {sys.prog.rows(), sys.prog.cols(), res.iterations, res.status};
  if (res.status == lp::Status::optimal) {
    out.feasible = true;
    std::vector<double> w(res.primal);
    for (double& x : w) {
      if (x < 0.0) x = 0.0;  // residual-sized dust only; construction revalidates
    }
    out.witness = NBodyMeasure(mu2.grid(), n, Mode::multiset, std::move(w), opts.variable_budget);
    if (tv_distance(marginal2(*out.witness), mu2) > 100 * m * opts.lp.tol_feasibility) {
      throw NumericalBreakdown("representability witness fails to reproduce the pair measure");
    }
  } else if (res.status == lp::Status::infeasible) {
    out.feasible = false;
    out.farkas = res.farkas;
    out.farkas_margin = res.farkas_margin;
    out.numerically_marginal = res.farkas_margin < 10 * opts.lp.tol_farkas;
  } else {
    throw NumericalBreakdown("representability query returned an unbounded status");
  }
  return out;
}

bool verify_representability_certificate(const PairMeasure& mu2, int n,
                                         std::span<const double> farkas, double tol,
                                         double* margin_out) {
  auto sys = build_system(mu2, n);
  return lp::verify_farkas(sys.prog, farkas, tol, margin_out);
}

MonotonicityVerdict monotonicity_check(const PairMeasure& mu2, int n, int m,
                                       const RepresentabilityOptions& opts) {
  if (m < 2 || m > n) throw DomainError("monotonicity_check: need 2 <= M <= N");
  MonotonicityVerdict verdict;
  verdict.n_representable = is_n_representable(mu2, n, opts).feasible;
  verdict.m_representable = is_n_representable(mu2, m, opts).feasible;
  verdict.implication_holds = !(verdict.n_representable && !verdict.m_representable);
  return verdict;
}

double hierarchy_value(const DiscreteMeasure& mu, int n, int k, const CostFunction& c,
                       const MmotOptions& opts) {
  if (k < 2) throw DomainError("hierarchy_value: need k >= 2");
  if (n < 2) throw DomainError("hierarchy_value: need N >= 2");
  const auto report = solve_reduced(mu, k, c, opts);
  if (report.infinite) return std::numeric_limits<double>::infinity();
  return pairs_of(n) * report.value_per_pair;
}

ProbeResult infinite_representability_probe(const PairMeasure& mu2, int k_max,
                                            const RepresentabilityOptions& opts) {
  if (k_max < 2) throw DomainError("infinite_representability_probe: need k_max >= 2");
  ProbeResult probe;
  for (int k = 2; k <= k_max; ++k) {
    auto answer = is_n_representable(mu2, k, opts);
    const bool feasible = answer.feasible;
    probe.answers.push_back(std::move(answer));
    if (!feasible) {
      probe.representable_up_to_k_max = false;
      probe.refuted_at = k;
      break;
    }
  }
  return probe;
}

}  // namespace mmot
