#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <sstream>
#include <vector>

#include "mmot/errors.hpp"
#include "mmot/lp.hpp"

namespace mmot::lp {

namespace {

using Rat = boost::multiprecision::cpp_rational;

struct Tableau {
  int rows;
  int nstruct;                    // structural columns (post-presolve)
  std::vector<std::vector<Rat>> t;  // rows x (nstruct + rows + 1), last col = rhs
  std::vector<int> basis;           // column index per row
  std::vector<Rat> cost;            // current phase costs, length nstruct + rows
  std::vector<int> orig_col;
  std::vector<int> flip;            // +1/-1 per row

  int total_cols() const { return nstruct + rows; }
  Rat& rhs(int r) { return t[r][total_cols()]; }

  Rat reduced_cost(int j) const {
    Rat z = 0;
    for (int i = 0; i < rows; ++i) {
      if (!cost[basis[i]].is_zero()) z += cost[basis[i]] * t[i][j];
    }
    return cost[j] - z;
  }

  void pivot(int prow, int pcol) {
    const Rat p = t[prow][pcol];
    for (auto& v : t[prow]) v /= p;
    for (int i = 0; i < rows; ++i) {
      if (i == prow) continue;
      const Rat f = t[i][pcol];
      if (f.is_zero()) continue;
      for (int k = 0; k <= total_cols(); ++k) t[i][k] -= f * t[prow][k];
    }
    basis[prow] = pcol;
  }

  // Bland's rule; artificials (>= nstruct) never enter. Returns true when
  // the current costs are optimal, false on unbounded.
  bool run(bool* unbounded) {
    *unbounded = false;
    for (int iter = 0; iter < 1000000; ++iter) {
      int enter = -1;
      for (int j = 0; j < nstruct; ++j) {
        bool basic = false;
        for (const int b : basis) {
          if (b == j) {
            basic = true;
            break;
          }
        }
        if (basic) continue;
        if (reduced_cost(j) < 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;

      int leave = -1;
      Rat best_ratio = 0;
      for (int i = 0; i < rows; ++i) {
        const bool artificial_row = basis[i] >= nstruct;
        const Rat& a = t[i][enter];
        Rat ratio;
        if (a > 0) {
          ratio = rhs(i) / a;
        } else if (artificial_row && !a.is_zero() && rhs(i).is_zero()) {
          ratio = 0;  // drive pinned artificials out at zero step
        } else {
          continue;
        }
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) {
        *unbounded = true;
        return false;
      }
      pivot(leave, enter);
    }
    throw NumericalBreakdown("exact simplex iteration limit reached");
  }

  std::vector<Rat> duals() const {
    std::vector<Rat> y(rows, Rat(0));
    for (int i = 0; i < rows; ++i) {
      for (int k = 0; k < rows; ++k) {
        if (!cost[basis[k]].is_zero()) y[i] += cost[basis[k]] * t[k][nstruct + i];
      }
    }
    return y;
  }
};

}  // namespace

ExactResult solve_exact(const LinearProgram& lp, std::size_t max_cols) {
  if (static_cast<std::size_t>(lp.cols()) > max_cols) {
    throw BudgetError("solve_exact: program exceeds the exact-solver size limit");
  }

  Tableau tab;
  tab.rows = lp.rows();
  for (int c = 0; c < lp.cols(); ++c) {
    if (!std::isinf(lp.objective()[c])) tab.orig_col.push_back(c);
  }
  tab.nstruct = static_cast<int>(tab.orig_col.size());
  const int width = tab.nstruct + tab.rows + 1;
  tab.t.assign(tab.rows, std::vector<Rat>(width, Rat(0)));
  std::vector<int> to_solver(lp.cols(), -1);
  for (int c = 0; c < tab.nstruct; ++c) to_solver[tab.orig_col[c]] = c;

  tab.flip.assign(tab.rows, 1);
  for (int r = 0; r < tab.rows; ++r) {
    const Rat b(lp.rhs()[r]);
    if (b < 0) tab.flip[r] = -1;
    tab.rhs(r) = tab.flip[r] * b;
  }
  for (const auto& e : lp.entries()) {
    const int sc = to_solver[e.col];
    if (sc < 0) continue;
    tab.t[e.row][sc] += Rat(tab.flip[e.row]) * Rat(e.value);
  }
  for (int r = 0; r < tab.rows; ++r) {
    tab.t[r][tab.nstruct + r] = 1;
    tab.basis.push_back(tab.nstruct + r);
  }

  ExactResult out;
  bool unbounded = false;

  // phase 1: minimize the artificial mass
  tab.cost.assign(tab.nstruct + tab.rows, Rat(0));
  for (int r = 0; r < tab.rows; ++r) tab.cost[tab.nstruct + r] = 1;
  tab.run(&unbounded);
  Rat artificial_mass = 0;
  for (int i = 0; i < tab.rows; ++i) {
    if (tab.basis[i] >= tab.nstruct) artificial_mass += tab.rhs(i);
  }
  if (!artificial_mass.is_zero()) {
    out.status = Status::infeasible;
    const auto y = tab.duals();
    out.farkas.resize(tab.rows);
    for (int r = 0; r < tab.rows; ++r) {
      out.farkas[r] = static_cast<double>(tab.flip[r]) * y[r].convert_to<double>();
    }
    out.primal.assign(lp.cols(), 0.0);
    return out;
  }

  // phase 2
  tab.cost.assign(tab.nstruct + tab.rows, Rat(0));
  for (int c = 0; c < tab.nstruct; ++c) tab.cost[c] = Rat(lp.objective()[tab.orig_col[c]]);
  tab.run(&unbounded);
  if (unbounded) {
    out.status = Status::unbounded;
    out.primal.assign(lp.cols(), 0.0);
    return out;
  }

  out.status = Status::optimal;
  out.primal.assign(lp.cols(), 0.0);
  Rat objective = 0;
  for (int i = 0; i < tab.rows; ++i) {
    if (tab.basis[i] < tab.nstruct) {
      out.primal[tab.orig_col[tab.basis[i]]] = tab.rhs(i).convert_to<double>();
      objective += tab.cost[tab.basis[i]] * tab.rhs(i);
    }
  }
  out.objective = objective.convert_to<double>();
  std::ostringstream exact;
  exact << boost::multiprecision::numerator(objective) << "/"
        << boost::multiprecision::denominator(objective);
  out.objective_exact = exact.str();
  const auto y = tab.duals();
  out.dual.resize(tab.rows);
  for (int r = 0; r < tab.rows; ++r) {
    out.dual[r] = static_cast<double>(tab.flip[r]) * y[r].convert_to<double>();
  }
  return out;
}

}  // namespace mmot::lp
