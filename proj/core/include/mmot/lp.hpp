#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mmot::lp {

// Standard-form linear program: minimize c.x subject to A x = b, x >= 0.
// The constraint matrix is held as triplets (column-indexed views are built
// inside the solver). Objective coefficients may be +infinity; presolve
// fixes such variables to 0 and eliminates them.
class LinearProgram {
 public:
  LinearProgram(int rows, int cols);

  void objective(int col, double coeff);
  void coefficient(int row, int col, double value);  // accumulates duplicates
  void rhs(int row, double value);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::span<const double> objective() const noexcept { return objective_; }
  std::span<const double> rhs() const noexcept { return rhs_; }

  struct Entry {
    int row;
    int col;
    double value;
  };
  std::span<const Entry> entries() const noexcept { return entries_; }

  // Fixed-column MPS dump (all rows type E, objective row COST). Variables
  // eliminated by the infinite-cost presolve appear as FX 0 bounds.
  void write_mps(std::ostream& os, std::string_view name = "MMOTLP") const;

 private:
  int rows_;
  int cols_;
  std::vector<double> objective_;
  std::vector<double> rhs_;
  std::vector<Entry> entries_;
};

enum class Status { optimal, infeasible, unbounded };

const char* to_string(Status s);

struct Result {
  Status status = Status::optimal;
  std::vector<double> primal;   // length cols
  std::vector<double> dual;     // length rows (equality multipliers)
  std::vector<double> farkas;   // length rows; nonempty iff infeasible
  double objective = 0.0;
  double feasibility_residual = 0.0;  // max |A x - b| at the solution
  double duality_gap = 0.0;           // |c.x - y.b|
  double farkas_margin = 0.0;         // y.b of the certificate
  int iterations = 0;
};

struct Options {
  double tol_feasibility = 1e-9;  // primal residual bound
  double tol_gap = 1e-8;          // duality gap bound
  double tol_farkas = 1e-7;       // required certificate margin
  int max_iterations = 200000;
  enum class Pricing { devex, dantzig, bland } pricing = Pricing::devex;
};

// Two-phase revised simplex with devex pricing (approximate steepest edge)
// and Bland's rule as the anti-cycling fallback. Deterministic for a fixed
// program. Throws NumericalBreakdown when residuals cannot be certified.
Result solve(const LinearProgram& lp, const Options& opts = {});

// Verifies a Farkas certificate against the program data: y.A <= tol
// componentwise and y.b >= margin.
bool verify_farkas(const LinearProgram& lp, std::span<const double> y, double tol,
                   double* margin_out = nullptr);

struct ExactResult {
  Status status = Status::optimal;
  std::vector<double> primal;
  std::vector<double> dual;
  std::vector<double> farkas;
  double objective = 0.0;
  std::string objective_exact;  // "p/q" in lowest terms
};

// Exact rational dense-tableau simplex with Bland's rule; the cross-check
// oracle for small instances (refuses programs with more than max_cols
// columns).
ExactResult solve_exact(const LinearProgram& lp, std::size_t max_cols = 5000);

}  // namespace mmot::lp
