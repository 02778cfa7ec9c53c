#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mmot/grid.hpp"

namespace mmot {

// Normalization tolerance: measures whose weights do not sum to 1 within
// this bound are rejected at construction, never silently renormalized.
inline constexpr double kNormTolerance = 1e-9;

// Default cap on stored weight vectors (dense tuples or multisets).
inline constexpr std::uint64_t kDefaultBudget = 2'000'000;

// Probability measure on the grid points: nonnegative weights summing to 1.
class DiscreteMeasure {
 public:
  DiscreteMeasure(GridPtr grid, std::vector<double> weights);

  static DiscreteMeasure dirac(GridPtr grid, std::size_t atom);
  static DiscreteMeasure uniform(GridPtr grid);

  const GridPtr& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }

 private:
  GridPtr grid_;
  std::vector<double> weights_;
};

// Measure on ordered pairs of grid points, stored as a dense m x m matrix
// (row-major). The symmetric construction mirrors an upper triangle so that
// w[i][j] == w[j][i] holds exactly.
class PairMeasure {
 public:
  PairMeasure(GridPtr grid, std::vector<double> dense_row_major);

  // upper[k] enumerates (i, j) with i <= j in row order; off-diagonal mass
  // is the total of the unordered pair and gets split evenly.
  static PairMeasure from_unordered(GridPtr grid, std::span<const double> upper);

  const GridPtr& grid() const noexcept { return grid_; }
  std::size_t points() const noexcept { return m_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double operator()(std::size_t i, std::size_t j) const { return weights_[i * m_ + j]; }

  bool is_symmetric() const;             // exact equality of w[i][j] and w[j][i]
  double diagonal_mass() const;
  // total mass of the unordered pair {i, j}: w[i][j] + w[j][i] for i != j,
  // w[i][i] on the diagonal.
  double unordered_mass(std::size_t i, std::size_t j) const;

 private:
  GridPtr grid_;
  std::size_t m_;
  std::vector<double> weights_;
};

enum class Mode { dense, multiset };

// Measure on N-tuples of grid points. Dense mode stores weights on all m^N
// ordered tuples (row-major). Multiset mode stores the total orbit mass on
// each of the C(m+N-1, N) size-N multisets, in the multiset enumeration
// order of multiset.hpp; measures in that mode are exchangeable by
// construction.
class NBodyMeasure {
 public:
  NBodyMeasure(GridPtr grid, int bodies, Mode mode, std::vector<double> weights,
               std::uint64_t budget = kDefaultBudget);

  static NBodyMeasure dirac_tuple(GridPtr grid, std::span<const int> tuple);

  const GridPtr& grid() const noexcept { return grid_; }
  int bodies() const noexcept { return n_; }
  Mode mode() const noexcept { return mode_; }
  std::span<const double> weights() const noexcept { return weights_; }

  double multiset_weight(std::span<const int> counts) const;

 private:
  GridPtr grid_;
  int n_;
  Mode mode_;
  std::vector<double> weights_;
};

// --- Operations -----------------------------------------------------------

// N-fold product of mu with itself, in multiset mode.
NBodyMeasure product_measure(const DiscreteMeasure& mu, int n,
                             std::uint64_t budget = kDefaultBudget);

// k-point marginal (projection onto the first k slots for dense input; for
// multiset input the result is the exchangeable k-marginal and slot choice
// is immaterial). Output mode matches the input mode.
NBodyMeasure marginal(const NBodyMeasure& gamma, int k);
DiscreteMeasure marginal1(const NBodyMeasure& gamma);
PairMeasure marginal2(const NBodyMeasure& gamma);

// Average over all coordinate permutations, returned in multiset mode.
// Computed by orbit aggregation, not by enumerating N! permutations.
NBodyMeasure symmetrize(const NBodyMeasure& gamma);

// Expands multiset mode to dense tuples (uniform weight across each orbit).
NBodyMeasure to_dense(const NBodyMeasure& gamma, std::uint64_t budget = kDefaultBudget);

// Mass mu(x) placed on the k-tuple (x, ..., x); multiset mode.
NBodyMeasure diagonal_pushforward(const DiscreteMeasure& mu, int k);

// mu (x) nu on ordered pairs, and the diagonal pair measure sum_i mu_i
// delta_(x_i, x_i).
PairMeasure tensor_pair(const DiscreteMeasure& mu, const DiscreteMeasure& nu);
PairMeasure diagonal_pair(const DiscreteMeasure& mu);

// Verifies permutation invariance of a dense measure on min(N!, max_perms)
// randomly sampled permutations.
bool sampled_symmetry_check(const NBodyMeasure& gamma, std::uint64_t seed,
                            int max_perms = 720, double tol = 1e-12);

// Total variation distance sum_x |alpha(x) - beta(x)| (the supremum of
// |alpha(f) - beta(f)| over |f| <= 1 on a finite space). Requires equal
// grids and equal arity.
double tv_distance(const DiscreteMeasure& a, const DiscreteMeasure& b);
double tv_distance(const PairMeasure& a, const PairMeasure& b);
double tv_distance(const NBodyMeasure& a, const NBodyMeasure& b);

}  // namespace mmot
