#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mmot/grid.hpp"
#include "mmot/measure.hpp"

namespace mmot {

// Symmetric translation-invariant pair cost c(x, y) = ell(x - y) with
// ell >= 0 and ell(z) = ell(-z). May take the value +infinity (singular
// costs); consumers treat inf * 0 = 0 so that mass-zero points never
// contribute to an integral.
class CostFunction {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  struct Flags {
    bool bounded = true;
    bool singular_at_zero = false;
    bool claims_positive_definite = false;
  };

  CostFunction(std::string name, Evaluator ell, Flags flags,
               std::map<std::string, double> parameters = {});

  double ell(std::span<const double> z) const { return ell_(z); }

  // ell(x_i - x_j) on a grid; minimum-image difference on periodic grids.
  double pair_value(const SupportGrid& grid, std::size_t i, std::size_t j) const;

  const std::string& name() const noexcept { return name_; }
  const Flags& flags() const noexcept { return flags_; }
  const std::map<std::string, double>& parameters() const noexcept { return parameters_; }

  // Largest pair value over the grid (may be +infinity for singular costs).
  double sup_on_grid(const SupportGrid& grid) const;

  // --- built-in costs ---
  static CostFunction coulomb();                         // 1/|z|
  static CostFunction coulomb_regularized(double eps);   // 1/max(|z|, eps)
  static CostFunction gaussian(double s);                // exp(-|z|^2 / (2 s^2))
  static CostFunction truncated_quadratic(double sigma); // exp(-|z|^2/2s^2) - exp(-s^2|z|^2/2), s > 1
  static CostFunction quadratic();                       // |z|^2

  // ell given by a table of (difference vector, value) rows; lookups match
  // coordinates to 1e-12 and evenness is filled in automatically.
  static CostFunction tabulated(std::vector<std::pair<std::vector<double>, double>> table);
  static CostFunction tabulated_from_csv(const std::string& path);

  // Parses "name" or "name:key=value,key=value", e.g. "gaussian:s=0.7071".
  static CostFunction parse(const std::string& text);

 private:
  std::string name_;
  Evaluator ell_;
  Flags flags_;
  std::map<std::string, double> parameters_;
};

// sum_{i,j} c(x_i, x_j) mu2[i][j], with inf * 0 = 0; +infinity when positive
// mass sits on a singular point.
double pair_cost_integral(const CostFunction& c, const PairMeasure& mu2);

// Total pair-potential cost sum over the C(N,2) unordered pairs. For a
// multiset-mode measure this is computed from within-multiset pair counts;
// it equals C(N,2) * pair_cost_integral(c, marginal2(gamma)) for any
// exchangeable gamma.
double nbody_cost(const CostFunction& c, const NBodyMeasure& gamma);

// Pair cost of a single multiset given by its count vector:
// sum_{i<j} n_i n_j ell(x_i - x_j) + sum_i C(n_i, 2) ell(0).
double multiset_pair_cost(const CostFunction& c, const SupportGrid& grid,
                          std::span<const int> counts);

enum class SpectrumClass { strictly_positive, positive, indefinite };

struct ClassifyResult {
  SpectrumClass verdict;
  std::vector<double> spectrum;  // real DFT coefficients, frequency-major order
  double min_coefficient;
};

const char* to_string(SpectrumClass c);

// Classifies ell by the sign of its DFT on a uniform periodic grid: all
// coefficients > tol -> strictly_positive, all > -tol -> positive, else
// indefinite. The verdict is relative to the sampling grid; nothing is
// claimed about the continuum transform. tol defaults to 1e-10.
ClassifyResult classify_positive_definite(const CostFunction& c, const SupportGrid& torus,
                                          double tol = 1e-10);

}  // namespace mmot
