#include "mmot/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>

#include "mmot/errors.hpp"
#include "mmot/multiset.hpp"

namespace mmot {

namespace {

void check_weights(std::span<const double> w, const char* what) {
  double total = 0.0;
  for (const double x : w) {
    if (!(x >= 0.0)) throw DomainError(std::string(what) + ": negative or NaN weight");
    total += x;
  }
  if (std::abs(total - 1.0) > kNormTolerance) {
    throw DomainError(std::string(what) + ": weights sum to " + std::to_string(total) +
                      ", expected 1 within 1e-9");
  }
}

std::uint64_t dense_size(std::size_t m, int n, std::uint64_t budget) {
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > budget / m + 1) throw BudgetError("dense tuple space exceeds budget");
    total *= m;
  }
  if (total > budget) throw BudgetError("dense tuple space exceeds budget");
  return total;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(GridPtr grid, std::vector<double> weights)
    : grid_(std::move(grid)), weights_(std::move(weights)) {
  if (!grid_) throw DomainError("DiscreteMeasure: null grid");
  if (weights_.size() != grid_->size()) throw DomainError("DiscreteMeasure: weight count mismatch");
  check_weights(weights_, "DiscreteMeasure");
}

DiscreteMeasure DiscreteMeasure::dirac(GridPtr grid, std::size_t atom) {
  std::vector<double> w(grid->size(), 0.0);
  w.at(atom) = 1.0;
  return DiscreteMeasure(std::move(grid), std::move(w));
}

DiscreteMeasure DiscreteMeasure::uniform(GridPtr grid) {
  std::vector<double> w(grid->size(), 1.0 / static_cast<double>(grid->size()));
  return DiscreteMeasure(std::move(grid), std::move(w));
}

PairMeasure::PairMeasure(GridPtr grid, std::vector<double> dense_row_major)
    : grid_(std::move(grid)), m_(0), weights_(std::move(dense_row_major)) {
  if (!grid_) throw DomainError("PairMeasure: null grid");
  m_ = grid_->size();
  if (weights_.size() != m_ * m_) throw DomainError("PairMeasure: expected m*m weights");
  check_weights(weights_, "PairMeasure");
}

PairMeasure PairMeasure::from_unordered(GridPtr grid, std::span<const double> upper) {
  const std::size_t m = grid->size();
  if (upper.size() != m * (m + 1) / 2) {
    throw DomainError("PairMeasure::from_unordered: expected m(m+1)/2 entries");
  }
  std::vector<double> dense(m * m, 0.0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j, ++k) {
      if (i == j) {
        dense[i * m + i] = upper[k];
      } else {
        const double half = upper[k] / 2.0;
        dense[i * m + j] = half;
        dense[j * m + i] = half;
      }
    }
  }
  return PairMeasure(std::move(grid), std::move(dense));
}

bool PairMeasure::is_symmetric() const {
  for (std::size_t i = 0; i < m_; ++i) {
    for (std::size_t j = i + 1; j < m_; ++j) {
      if (weights_[i * m_ + j] != weights_[j * m_ + i]) return false;
    }
  }
  return true;
}

double PairMeasure::diagonal_mass() const {
  double total = 0.0;
  for (std::size_t i = 0; i < m_; ++i) total += weights_[i * m_ + i];
  return total;
}

double PairMeasure::unordered_mass(std::size_t i, std::size_t j) const {
  if (i == j) return weights_[i * m_ + i];
  return weights_[i * m_ + j] + weights_[j * m_ + i];
}

NBodyMeasure::NBodyMeasure(GridPtr grid, int bodies, Mode mode, std::vector<double> weights,
                           std::uint64_t budget)
    : grid_(std::move(grid)), n_(bodies), mode_(mode), weights_(std::move(weights)) {
  if (!grid_) throw DomainError("NBodyMeasure: null grid");
  if (n_ < 2) throw DomainError("NBodyMeasure: need at least 2 bodies");
  const std::size_t m = grid_->size();
  const std::uint64_t expected = (mode_ == Mode::dense)
                                     ? dense_size(m, n_, budget)
                                     : multiset::count(static_cast<int>(m), n_);
  if (expected > budget) throw BudgetError("NBodyMeasure exceeds variable budget");
  if (weights_.size() != expected) throw DomainError("NBodyMeasure: weight count mismatch");
  check_weights(weights_, "NBodyMeasure");
}

NBodyMeasure NBodyMeasure::dirac_tuple(GridPtr grid, std::span<const int> tuple) {
  const std::size_t m = grid->size();
  const int n = static_cast<int>(tuple.size());
  std::uint64_t idx = 0;
  for (const int t : tuple) {
    if (t < 0 || static_cast<std::size_t>(t) >= m) throw DomainError("dirac_tuple: index out of range");
    idx = idx * m + static_cast<std::uint64_t>(t);
  }
  std::vector<double> w(dense_size(m, n, kDefaultBudget), 0.0);
  w[idx] = 1.0;
  return NBodyMeasure(std::move(grid), n, Mode::dense, std::move(w));
}

double NBodyMeasure::multiset_weight(std::span<const int> counts) const {
  if (mode_ != Mode::multiset) throw DomainError("multiset_weight: measure is dense");
  return weights_[multiset::rank(counts)];
}

NBodyMeasure product_measure(const DiscreteMeasure& mu, int n, std::uint64_t budget) {
  if (n < 2) throw DomainError("product_measure: need n >= 2");
  const int m = static_cast<int>(mu.size());
  const std::uint64_t total = multiset::count(m, n);
  if (total > budget) throw BudgetError("product_measure exceeds variable budget");
  std::vector<double> w(total, 0.0);
  std::vector<int> counts(m);
  multiset::first(counts, n);
  std::uint64_t idx = 0;
  do {
    double p = multiset::orderings(counts);
    for (int i = 0; i < m && p != 0.0; ++i) {
      for (int rep = 0; rep < counts[i]; ++rep) p *= mu.weight(i);
    }
    w[idx++] = p;
  } while (multiset::next(counts));
  return NBodyMeasure(mu.grid(), n, Mode::multiset, std::move(w), budget);
}

namespace {

// k-marginal of a multiset-mode measure via the multivariate hypergeometric
// projection: a multiset with counts (n_i) sends mass prod_i C(n_i, k_i) /
// C(N, k) to the sub-multiset with counts (k_i).
std::vector<double> multiset_marginal_weights(const NBodyMeasure& gamma, int k) {
  const int m = static_cast<int>(gamma.grid()->size());
  const int n = gamma.bodies();
  const double denom = static_cast<double>(multiset::binomial(n, k));
  std::vector<double> out(multiset::count(m, k), 0.0);
  std::vector<int> counts(m);
  multiset::first(counts, n);
  std::uint64_t idx = 0;
  do {
    const double w = gamma.weights()[idx++];
    if (w == 0.0) continue;
    std::vector<int> sub(m);
    multiset::first(sub, k);
    std::uint64_t sub_idx = 0;
    do {
      double factor = 1.0;
      for (int i = 0; i < m && factor != 0.0; ++i) {
        if (sub[i] > counts[i]) {
          factor = 0.0;
        } else if (sub[i] > 0) {
          factor *= static_cast<double>(multiset::binomial(counts[i], sub[i]));
        }
      }
      if (factor != 0.0) out[sub_idx] += w * factor / denom;
      ++sub_idx;
    } while (multiset::next(sub));
  } while (multiset::next(counts));
  return out;
}

std::vector<double> dense_marginal_weights(const NBodyMeasure& gamma, int k) {
  const std::size_t m = gamma.grid()->size();
  const int n = gamma.bodies();
  std::size_t keep = 1;
  for (int i = 0; i < k; ++i) keep *= m;
  std::size_t drop = 1;
  for (int i = 0; i < n - k; ++i) drop *= m;
  std::vector<double> out(keep, 0.0);
  for (std::size_t head = 0; head < keep; ++head) {
    double total = 0.0;
    const std::size_t base = head * drop;
    for (std::size_t tail = 0; tail < drop; ++tail) total += gamma.weights()[base + tail];
    out[head] = total;
  }
  return out;
}

}  // namespace

NBodyMeasure marginal(const NBodyMeasure& gamma, int k) {
  const int n = gamma.bodies();
  if (k < 2 || k > n) throw DomainError("marginal: need 2 <= k <= N (use marginal1 for k=1)");
  if (k == n) return gamma;
  auto w = (gamma.mode() == Mode::multiset) ? multiset_marginal_weights(gamma, k)
                                            : dense_marginal_weights(gamma, k);
  return NBodyMeasure(gamma.grid(), k, gamma.mode(), std::move(w));
}

DiscreteMeasure marginal1(const NBodyMeasure& gamma) {
  const std::size_t m = gamma.grid()->size();
  std::vector<double> out(m, 0.0);
  if (gamma.mode() == Mode::multiset) {
    const double n = gamma.bodies();
    std::vector<int> counts(m);
    multiset::first(counts, gamma.bodies());
    std::uint64_t idx = 0;
    do {
      const double w = gamma.weights()[idx++];
      if (w == 0.0) continue;
      for (std::size_t i = 0; i < m; ++i) {
        if (counts[i] > 0) out[i] += w * counts[i] / n;
      }
    } while (multiset::next(counts));
  } else {
    std::size_t rest = 1;
    for (int i = 0; i < gamma.bodies() - 1; ++i) rest *= m;
    for (std::size_t i = 0; i < m; ++i) {
      double total = 0.0;
      for (std::size_t tail = 0; tail < rest; ++tail) total += gamma.weights()[i * rest + tail];
      out[i] = total;
    }
  }
  return DiscreteMeasure(gamma.grid(), std::move(out));
}

PairMeasure marginal2(const NBodyMeasure& gamma) {
  const std::size_t m = gamma.grid()->size();
  std::vector<double> out(m * m, 0.0);
  if (gamma.mode() == Mode::multiset) {
    const double n = gamma.bodies();
    const double pairs = n * (n - 1.0);
    std::vector<int> counts(m);
    multiset::first(counts, gamma.bodies());
    std::uint64_t idx = 0;
    do {
      const double w = gamma.weights()[idx++];
      if (w != 0.0) {
        for (std::size_t i = 0; i < m; ++i) {
          if (counts[i] == 0) continue;
          out[i * m + i] += w * counts[i] * (counts[i] - 1.0) / pairs;
          for (std::size_t j = i + 1; j < m; ++j) {
            if (counts[j] == 0) continue;
            const double ordered = w * counts[i] * counts[j] / pairs;
            out[i * m + j] += ordered;
            out[j * m + i] += ordered;
          }
        }
      }
    } while (multiset::next(counts));
  } else {
    std::size_t rest = 1;
    for (int i = 0; i < gamma.bodies() - 2; ++i) rest *= m;
    for (std::size_t ij = 0; ij < m * m; ++ij) {
      double total = 0.0;
      for (std::size_t tail = 0; tail < rest; ++tail) total += gamma.weights()[ij * rest + tail];
      out[ij] = total;
    }
  }
  return PairMeasure(gamma.grid(), std::move(out));
}

NBodyMeasure symmetrize(const NBodyMeasure& gamma) {
  if (gamma.mode() == Mode::multiset) return gamma;
  const int m = static_cast<int>(gamma.grid()->size());
  const int n = gamma.bodies();
  std::vector<double> w(multiset::count(m, n), 0.0);
  std::vector<int> tuple(n);
  const std::size_t total = gamma.weights().size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    const double v = gamma.weights()[idx];
    if (v == 0.0) continue;
    std::size_t rest = idx;
    for (int p = n - 1; p >= 0; --p) {
      tuple[p] = static_cast<int>(rest % m);
      rest /= m;
    }
    const auto counts = multiset::to_counts(tuple, m);
    w[multiset::rank(counts)] += v;
  }
  return NBodyMeasure(gamma.grid(), n, Mode::multiset, std::move(w));
}

NBodyMeasure to_dense(const NBodyMeasure& gamma, std::uint64_t budget) {
  if (gamma.mode() == Mode::dense) return gamma;
  const int m = static_cast<int>(gamma.grid()->size());
  const int n = gamma.bodies();
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::uint64_t>(m);
  if (total > budget) throw BudgetError("to_dense exceeds budget");
  std::vector<double> w(total, 0.0);
  std::vector<int> counts(m);
  multiset::first(counts, n);
  std::uint64_t idx = 0;
  do {
    const double orbit_mass = gamma.weights()[idx++];
    if (orbit_mass == 0.0) continue;
    const double per_tuple = orbit_mass / multiset::orderings(counts);
    // iterate over all distinct orderings of the multiset
    auto tuple = multiset::to_tuple(counts);
    std::sort(tuple.begin(), tuple.end());
    do {
      std::uint64_t t = 0;
      for (const int v : tuple) t = t * m + static_cast<std::uint64_t>(v);
      w[t] = per_tuple;
    } while (std::next_permutation(tuple.begin(), tuple.end()));
  } while (multiset::next(counts));
  return NBodyMeasure(gamma.grid(), n, Mode::dense, std::move(w), budget);
}

NBodyMeasure diagonal_pushforward(const DiscreteMeasure& mu, int k) {
  if (k < 2) throw DomainError("diagonal_pushforward: need k >= 2");
  const int m = static_cast<int>(mu.size());
  std::vector<double> w(multiset::count(m, k), 0.0);
  std::vector<int> counts(m, 0);
  for (int i = 0; i < m; ++i) {
    counts.assign(m, 0);
    counts[i] = k;
    w[multiset::rank(counts)] = mu.weight(i);
  }
  return NBodyMeasure(mu.grid(), k, Mode::multiset, std::move(w));
}

PairMeasure tensor_pair(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (!same_grid(mu.grid(), nu.grid())) throw DomainError("tensor_pair: grid mismatch");
  const std::size_t m = mu.size();
  std::vector<double> w(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) w[i * m + j] = mu.weight(i) * nu.weight(j);
  }
  return PairMeasure(mu.grid(), std::move(w));
}

PairMeasure diagonal_pair(const DiscreteMeasure& mu) {
  const std::size_t m = mu.size();
  std::vector<double> w(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) w[i * m + i] = mu.weight(i);
  return PairMeasure(mu.grid(), std::move(w));
}

bool sampled_symmetry_check(const NBodyMeasure& gamma, std::uint64_t seed, int max_perms,
                            double tol) {
  if (gamma.mode() == Mode::multiset) return true;
  const std::size_t m = gamma.grid()->size();
  const int n = gamma.bodies();
  double factorial = 1.0;
  for (int i = 2; i <= n; ++i) factorial *= i;
  const int trials = static_cast<int>(std::min<double>(factorial, max_perms));
  std::mt19937_64 rng(seed);
  std::vector<int> perm(n);
  std::vector<int> tuple(n), permuted(n);
  for (int t = 0; t < trials; ++t) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const std::size_t total = gamma.weights().size();
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rest = idx;
      for (int p = n - 1; p >= 0; --p) {
        tuple[p] = static_cast<int>(rest % m);
        rest /= m;
      }
      for (int p = 0; p < n; ++p) permuted[p] = tuple[perm[p]];
      std::size_t pidx = 0;
      for (const int v : permuted) pidx = pidx * m + static_cast<std::size_t>(v);
      if (std::abs(gamma.weights()[idx] - gamma.weights()[pidx]) > tol) return false;
    }
  }
  return true;
}

namespace {

double l1_diff(std::span<const double> a, std::span<const double> b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
  return total;
}

}  // namespace

double tv_distance(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (!same_grid(a.grid(), b.grid())) throw DomainError("tv_distance: grid mismatch");
  return l1_diff(a.weights(), b.weights());
}

double tv_distance(const PairMeasure& a, const PairMeasure& b) {
  if (!same_grid(a.grid(), b.grid())) throw DomainError("tv_distance: grid mismatch");
  return l1_diff(a.weights(), b.weights());
}

double tv_distance(const NBodyMeasure& a, const NBodyMeasure& b) {
  if (!same_grid(a.grid(), b.grid())) throw DomainError("tv_distance: grid mismatch");
  if (a.bodies() != b.bodies()) throw DomainError("tv_distance: arity mismatch");
  if (a.mode() == b.mode()) return l1_diff(a.weights(), b.weights());
  // mixed modes: compare on the dense tuple space
  const NBodyMeasure da = (a.mode() == Mode::dense) ? a : to_dense(a);
  const NBodyMeasure db = (b.mode() == Mode::dense) ? b : to_dense(b);
  return l1_diff(da.weights(), db.weights());
}

}  // namespace mmot
