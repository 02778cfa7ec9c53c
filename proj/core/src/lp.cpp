#include "mmot/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "mmot/errors.hpp"

namespace mmot::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kZeroStep = 1e-12;

// presolved, row-flipped program in column-major form
struct Csc {
  int rows = 0;
  int ncols = 0;               // structural columns kept
  std::vector<int> start;      // ncols + 1
  std::vector<int> ridx;
  std::vector<double> val;
  std::vector<double> cost;    // structural objective
  std::vector<double> b;       // flipped rhs (>= 0)
  std::vector<double> sign;    // row flip applied to A and b
  std::vector<int> orig_col;   // solver column -> original column
};

Csc build(const LinearProgram& lp) {
  Csc p;
  p.rows = lp.rows();
  p.sign.assign(p.rows, 1.0);
  p.b.assign(lp.rhs().begin(), lp.rhs().end());
  for (int r = 0; r < p.rows; ++r) {
    if (p.b[r] < 0.0) {
      p.sign[r] = -1.0;
      p.b[r] = -p.b[r];
    }
  }

  std::vector<int> keep;
  keep.reserve(lp.cols());
  for (int c = 0; c < lp.cols(); ++c) {
    if (!std::isinf(lp.objective()[c])) keep.push_back(c);
  }
  p.ncols = static_cast<int>(keep.size());
  std::vector<int> to_solver(lp.cols(), -1);
  for (int c = 0; c < p.ncols; ++c) to_solver[keep[c]] = c;
  p.orig_col = std::move(keep);
  p.cost.resize(p.ncols);
  for (int c = 0; c < p.ncols; ++c) p.cost[c] = lp.objective()[p.orig_col[c]];

  // bucket entries per column, accumulating duplicates
  std::vector<std::vector<std::pair<int, double>>> cols(p.ncols);
  for (const auto& e : lp.entries()) {
    const int sc = to_solver[e.col];
    if (sc < 0) continue;
    cols[sc].emplace_back(e.row, e.value * p.sign[e.row]);
  }
  p.start.assign(p.ncols + 1, 0);
  for (int c = 0; c < p.ncols; ++c) {
    auto& entries = cols[c];
    std::sort(entries.begin(), entries.end());
    int unique = 0;
    for (std::size_t i = 0; i < entries.size();) {
      std::size_t j = i;
      double total = 0.0;
      while (j < entries.size() && entries[j].first == entries[i].first) total += entries[j++].second;
      entries[unique++] = {entries[i].first, total};
      i = j;
    }
    entries.resize(unique);
    p.start[c + 1] = p.start[c] + unique;
  }
  p.ridx.resize(p.start.back());
  p.val.resize(p.start.back());
  for (int c = 0; c < p.ncols; ++c) {
    int at = p.start[c];
    for (const auto& [r, v] : cols[c]) {
      p.ridx[at] = r;
      p.val[at] = v;
      ++at;
    }
  }
  return p;
}

class Simplex {
 public:
  Simplex(const Csc& p, const Options& opts) : p_(p), o_(opts) {
    const int r = p_.rows;
    basis_.resize(r);
    binv_.assign(static_cast<std::size_t>(r) * r, 0.0);
    xb_ = p_.b;
    for (int i = 0; i < r; ++i) {
      basis_[i] = p_.ncols + i;           // artificial for row i
      binv_[static_cast<std::size_t>(i) * r + i] = 1.0;
    }
    in_basis_.assign(p_.ncols + r, false);
    for (const int b : basis_) in_basis_[b] = true;
    weights_.assign(p_.ncols, 1.0);
  }

  bool is_artificial(int col) const { return col >= p_.ncols; }

  // column of A (structural) or identity (artificial), flipped space
  template <typename F>
  void for_col(int col, F&& f) const {
    if (is_artificial(col)) {
      f(col - p_.ncols, 1.0);
      return;
    }
    for (int k = p_.start[col]; k < p_.start[col + 1]; ++k) f(p_.ridx[k], p_.val[k]);
  }

  double col_dot(int col, std::span<const double> y) const {
    double s = 0.0;
    for_col(col, [&](int r, double v) { s += y[r] * v; });
    return s;
  }

  std::vector<double> btran(std::span<const double> cb) const {
    const int r = p_.rows;
    std::vector<double> y(r, 0.0);
    for (int i = 0; i < r; ++i) {
      const double c = cb[i];
      if (c == 0.0) continue;
      const double* row = binv_.data() + static_cast<std::size_t>(i) * r;
      for (int k = 0; k < r; ++k) y[k] += c * row[k];
    }
    return y;
  }

  std::vector<double> ftran(int col) const {
    const int r = p_.rows;
    std::vector<double> u(r, 0.0);
    for_col(col, [&](int row, double v) {
      for (int i = 0; i < r; ++i) u[i] += binv_[static_cast<std::size_t>(i) * r + row] * v;
    });
    return u;
  }

  void refactorize() {
    const int r = p_.rows;
    // gather basis columns and invert by Gauss-Jordan with partial pivoting
    std::vector<double> m(static_cast<std::size_t>(r) * r, 0.0);
    for (int j = 0; j < r; ++j) {
      for_col(basis_[j], [&](int row, double v) { m[static_cast<std::size_t>(row) * r + j] = v; });
    }
    std::vector<double> inv(static_cast<std::size_t>(r) * r, 0.0);
    for (int i = 0; i < r; ++i) inv[static_cast<std::size_t>(i) * r + i] = 1.0;
    for (int c = 0; c < r; ++c) {
      int piv = c;
      double best = std::abs(m[static_cast<std::size_t>(c) * r + c]);
      for (int i = c + 1; i < r; ++i) {
        const double a = std::abs(m[static_cast<std::size_t>(i) * r + c]);
        if (a > best) {
          best = a;
          piv = i;
        }
      }
      if (best < 1e-13) throw NumericalBreakdown("singular basis during refactorization");
      if (piv != c) {
        for (int k = 0; k < r; ++k) {
          std::swap(m[static_cast<std::size_t>(piv) * r + k], m[static_cast<std::size_t>(c) * r + k]);
          std::swap(inv[static_cast<std::size_t>(piv) * r + k], inv[static_cast<std::size_t>(c) * r + k]);
        }
      }
      const double d = m[static_cast<std::size_t>(c) * r + c];
      for (int k = 0; k < r; ++k) {
        m[static_cast<std::size_t>(c) * r + k] /= d;
        inv[static_cast<std::size_t>(c) * r + k] /= d;
      }
      for (int i = 0; i < r; ++i) {
        if (i == c) continue;
        const double f = m[static_cast<std::size_t>(i) * r + c];
        if (f == 0.0) continue;
        for (int k = 0; k < r; ++k) {
          m[static_cast<std::size_t>(i) * r + k] -= f * m[static_cast<std::size_t>(c) * r + k];
          inv[static_cast<std::size_t>(i) * r + k] -= f * inv[static_cast<std::size_t>(c) * r + k];
        }
      }
    }
    binv_ = std::move(inv);
    recompute_xb();
  }

  void recompute_xb() {
    const int r = p_.rows;
    for (int i = 0; i < r; ++i) {
      double s = 0.0;
      const double* row = binv_.data() + static_cast<std::size_t>(i) * r;
      for (int k = 0; k < r; ++k) s += row[k] * p_.b[k];
      xb_[i] = s;
    }
  }

  // one simplex phase over the given costs; returns iterations used
  int run_phase(std::span<const double> cost, bool phase1, int iter_budget) {
    const int r = p_.rows;
    double cost_scale = 1.0;
    for (const double c : cost) cost_scale = std::max(cost_scale, std::abs(c));
    const double tol_d = 1e-9 * cost_scale;

    std::fill(weights_.begin(), weights_.end(), 1.0);
    int degenerate_run = 0;
    bool bland = o_.pricing == Options::Pricing::bland;
    int it = 0;

    std::vector<double> cb(r);
    for (; it < iter_budget; ++it) {
      if (it > 0 && it % 64 == 0) refactorize();
      for (int i = 0; i < r; ++i) {
        const int bc = basis_[i];
        cb[i] = is_artificial(bc) ? (phase1 ? 1.0 : 0.0) : cost[bc];
      }
      const auto y = btran(cb);

      // pricing over nonbasic structural columns
      int enter = -1;
      double best_score = 0.0;
      for (int j = 0; j < p_.ncols; ++j) {
        if (in_basis_[j]) continue;
        const double d = cost[j] - col_dot(j, y);
        if (d >= -tol_d) continue;
        if (bland) {
          enter = j;
          break;
        }
        double score = d * d;
        if (o_.pricing == Options::Pricing::devex) score /= weights_[j];
        if (enter < 0 || score > best_score) {
          enter = j;
          best_score = score;
        }
      }
      if (enter < 0) return it;  // phase optimal

      const auto u = ftran(enter);

      // ratio test; basic artificials are pinned at zero in phase 2
      int leave = -1;
      double theta = kInf;
      double leave_pivot = 0.0;
      bool leave_artificial = false;
      for (int i = 0; i < r; ++i) {
        const bool art = is_artificial(basis_[i]);
        double ratio;
        if (u[i] > kPivotTol) {
          ratio = std::max(xb_[i], 0.0) / u[i];
        } else if (!phase1 && art && u[i] < -kPivotTol) {
          ratio = 0.0;  // artificial must not grow above zero
        } else {
          continue;
        }
        const bool better =
            leave < 0 || ratio < theta - 1e-12 ||
            (ratio < theta + 1e-12 &&
             ((art && !leave_artificial) ||
              (art == leave_artificial && std::abs(u[i]) > std::abs(leave_pivot)) ));
        if (bland) {
          if (leave < 0 || ratio < theta - 1e-15 ||
              (ratio <= theta + 1e-15 && basis_[i] < basis_[leave])) {
            leave = i;
            theta = ratio;
            leave_pivot = u[i];
            leave_artificial = art;
          }
        } else if (better) {
          leave = i;
          theta = ratio;
          leave_pivot = u[i];
          leave_artificial = art;
        }
      }
      if (leave < 0) {
        if (phase1) throw NumericalBreakdown("phase-1 direction unbounded");
        unbounded_ = true;
        return it;
      }

      // devex reference weight update needs the pivot row of the tableau
      if (!bland && o_.pricing == Options::Pricing::devex) {
        const double* rho = binv_.data() + static_cast<std::size_t>(leave) * r;
        const double aq = u[leave];
        const double wq = std::max(weights_[enter], 1.0);
        for (int j = 0; j < p_.ncols; ++j) {
          if (in_basis_[j] || j == enter) continue;
          double alpha = 0.0;
          for_col(j, [&](int row, double v) { alpha += rho[row] * v; });
          if (alpha == 0.0) continue;
          const double cand = (alpha / aq) * (alpha / aq) * wq;
          if (cand > weights_[j]) weights_[j] = cand;
        }
        const int leaving_col = basis_[leave];
        if (!is_artificial(leaving_col)) {
          weights_[leaving_col] = std::max(wq / (aq * aq), 1.0);
        }
      }

      // basis exchange and product-form inverse update
      const int leaving_col = basis_[leave];
      in_basis_[leaving_col] = false;
      in_basis_[enter] = true;
      basis_[leave] = enter;
      const double piv = u[leave];
      double* prow = binv_.data() + static_cast<std::size_t>(leave) * r;
      for (int k = 0; k < r; ++k) prow[k] /= piv;
      for (int i = 0; i < r; ++i) {
        if (i == leave) continue;
        const double f = u[i];
        if (f == 0.0) continue;
        double* row = binv_.data() + static_cast<std::size_t>(i) * r;
        for (int k = 0; k < r; ++k) row[k] -= f * prow[k];
      }
      for (int i = 0; i < r; ++i) xb_[i] -= theta * u[i];
      xb_[leave] = theta;

      // anti-cycling: long degenerate runs switch pricing to Bland
      if (theta <= kZeroStep) {
        if (++degenerate_run > 3 * (r + 10) && !bland) bland = true;
      } else {
        degenerate_run = 0;
        if (bland && o_.pricing != Options::Pricing::bland) bland = false;
      }
    }
    throw NumericalBreakdown("simplex iteration limit reached");
  }

  const Csc& p_;
  const Options& o_;
  std::vector<int> basis_;
  std::vector<double> binv_;  // r x r row-major
  std::vector<double> xb_;
  std::vector<bool> in_basis_;
  std::vector<double> weights_;
  bool unbounded_ = false;
};

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (const double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

LinearProgram::LinearProgram(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows_ < 1 || cols_ < 1) throw DomainError("LinearProgram: rows and cols must be >= 1");
  objective_.assign(cols_, 0.0);
  rhs_.assign(rows_, 0.0);
}

void LinearProgram::objective(int col, double coeff) {
  if (std::isnan(coeff) || coeff == -kInf) throw DomainError("LinearProgram: bad objective coefficient");
  objective_.at(col) = coeff;
}

void LinearProgram::coefficient(int row, int col, double value) {
  if (!std::isfinite(value)) throw DomainError("LinearProgram: constraint entries must be finite");
  if (row < 0 || row >= rows_ || col < 0 || col >= cols_) {
    throw DomainError("LinearProgram: entry index out of range");
  }
  if (value != 0.0) entries_.push_back({row, col, value});
}

void LinearProgram::rhs(int row, double value) {
  if (!std::isfinite(value)) throw DomainError("LinearProgram: rhs must be finite");
  rhs_.at(row) = value;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
  }
  return "?";
}

Result solve(const LinearProgram& lp, const Options& opts) {
  const Csc p = build(lp);
  Simplex s(p, opts);
  Result out;

  const double b_scale = 1.0 + max_abs(p.b);
  const double feas_threshold = std::max(opts.tol_feasibility * b_scale, 1e-11);

  std::vector<double> zero_cost(p.ncols, 0.0);
  int iters = s.run_phase(zero_cost, /*phase1=*/true, opts.max_iterations);
  s.refactorize();

  double phase1_value = 0.0;
  for (int i = 0; i < p.rows; ++i) {
    if (s.is_artificial(s.basis_[i])) phase1_value += std::max(s.xb_[i], 0.0);
  }

  if (phase1_value > feas_threshold) {
    std::vector<double> cb(p.rows);
    for (int i = 0; i < p.rows; ++i) cb[i] = s.is_artificial(s.basis_[i]) ? 1.0 : 0.0;
    const auto y = s.btran(cb);
    out.status = Status::infeasible;
    out.farkas.resize(p.rows);
    for (int r = 0; r < p.rows; ++r) out.farkas[r] = p.sign[r] * y[r];
    out.farkas_margin = phase1_value;
    out.iterations = iters;
    out.primal.assign(lp.cols(), 0.0);
    return out;
  }

  iters += s.run_phase(p.cost, /*phase1=*/false, opts.max_iterations - iters);
  out.iterations = iters;
  if (s.unbounded_) {
    out.status = Status::unbounded;
    out.primal.assign(lp.cols(), 0.0);
    return out;
  }
  s.refactorize();

  // assemble primal in original column space
  out.primal.assign(lp.cols(), 0.0);
  for (int i = 0; i < p.rows; ++i) {
    const int col = s.basis_[i];
    if (!s.is_artificial(col)) out.primal[p.orig_col[col]] = s.xb_[i];
  }
  for (double& x : out.primal) {
    if (x < 0.0 && x > -opts.tol_feasibility) x = 0.0;
  }

  std::vector<double> cb(p.rows);
  for (int i = 0; i < p.rows; ++i) {
    const int bc = s.basis_[i];
    cb[i] = s.is_artificial(bc) ? 0.0 : p.cost[bc];
  }
  const auto y = s.btran(cb);
  out.dual.resize(p.rows);
  for (int r = 0; r < p.rows; ++r) out.dual[r] = p.sign[r] * y[r];

  out.objective = 0.0;
  for (int c = 0; c < lp.cols(); ++c) {
    if (out.primal[c] != 0.0) out.objective += lp.objective()[c] * out.primal[c];
  }

  // certify: primal residual against the original data, duality gap
  std::vector<double> ax(lp.rows(), 0.0);
  for (const auto& e : lp.entries()) ax[e.row] += e.value * out.primal[e.col];
  double residual = 0.0;
  for (int r = 0; r < lp.rows(); ++r) residual = std::max(residual, std::abs(ax[r] - lp.rhs()[r]));
  double ybT = 0.0;
  for (int r = 0; r < lp.rows(); ++r) ybT += out.dual[r] * lp.rhs()[r];
  out.feasibility_residual = residual;
  out.duality_gap = std::abs(out.objective - ybT);
  if (residual > opts.tol_feasibility * b_scale) {
    throw NumericalBreakdown("LP primal residual " + std::to_string(residual) +
                             " exceeds tolerance");
  }
  if (out.duality_gap > opts.tol_gap * (1.0 + std::abs(out.objective))) {
    throw NumericalBreakdown("LP duality gap " + std::to_string(out.duality_gap) +
                             " exceeds tolerance");
  }
  out.status = Status::optimal;
  return out;
}

bool verify_farkas(const LinearProgram& lp, std::span<const double> y, double tol,
                   double* margin_out) {
  if (static_cast<int>(y.size()) != lp.rows()) return false;
  std::vector<double> yta(lp.cols(), 0.0);
  for (const auto& e : lp.entries()) yta[e.col] += y[e.row] * e.value;
  for (int c = 0; c < lp.cols(); ++c) {
    if (std::isinf(lp.objective()[c])) continue;  // fixed to zero by presolve
    if (yta[c] > tol) return false;
  }
  double margin = 0.0;
  for (int r = 0; r < lp.rows(); ++r) margin += y[r] * lp.rhs()[r];
  if (margin_out) *margin_out = margin;
  return margin > 0.0;
}

}  // namespace mmot::lp
