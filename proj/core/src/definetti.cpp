#include "mmot/definetti.hpp"

#include <cmath>
#include <utility>

#include "mmot/errors.hpp"
#include "mmot/multiset.hpp"

namespace mmot {

Mixture::Mixture(std::vector<DiscreteMeasure> components, std::vector<double> weights)
    : components_(std::move(components)), weights_(std::move(weights)) {
  if (components_.empty()) throw DomainError("Mixture: needs at least one component");
  if (components_.size() != weights_.size()) throw DomainError("Mixture: weight count mismatch");
  double total = 0.0;
  for (const double w : weights_) {
    if (!(w >= 0.0)) throw DomainError("Mixture: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kNormTolerance) throw DomainError("Mixture: weights must sum to 1");
  for (const auto& q : components_) {
    if (!same_grid(q.grid(), components_.front().grid())) {
      throw DomainError("Mixture: components must share one grid");
    }
  }
}

PairMeasure mixture_pair_marginal(const Mixture& nu) {
  const std::size_t m = nu.component(0).size();
  std::vector<double> w(m * m, 0.0);
  for (std::size_t a = 0; a < nu.size(); ++a) {
    const double va = nu.weight(a);
    if (va == 0.0) continue;
    const auto& q = nu.component(a);
    for (std::size_t i = 0; i < m; ++i) {
      const double qi = q.weight(i);
      if (qi == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) w[i * m + j] += va * qi * q.weight(j);
    }
  }
  return PairMeasure(nu.grid(), std::move(w));
}

DiscreteMeasure mixture_mean(const Mixture& nu) {
  const std::size_t m = nu.component(0).size();
  std::vector<double> w(m, 0.0);
  for (std::size_t a = 0; a < nu.size(); ++a) {
    for (std::size_t i = 0; i < m; ++i) w[i] += nu.weight(a) * nu.component(a).weight(i);
  }
  return DiscreteMeasure(nu.grid(), std::move(w));
}

NBodyMeasure mixture_product_marginal(const Mixture& nu, int k, std::uint64_t budget) {
  if (k < 2) throw DomainError("mixture_product_marginal: need k >= 2");
  const int m = static_cast<int>(nu.component(0).size());
  const std::uint64_t total = multiset::count(m, k);
  if (total > budget) throw BudgetError("mixture_product_marginal exceeds budget");
  std::vector<double> w(total, 0.0);
  std::vector<int> counts(m);
  for (std::size_t a = 0; a < nu.size(); ++a) {
    const double va = nu.weight(a);
    if (va == 0.0) continue;
    const auto& q = nu.component(a);
    multiset::first(counts, k);
    std::uint64_t idx = 0;
    do {
      double p = multiset::orderings(counts);
      for (int i = 0; i < m && p != 0.0; ++i) {
        for (int rep = 0; rep < counts[i]; ++rep) p *= q.weight(i);
      }
      w[idx++] += va * p;
    } while (multiset::next(counts));
  }
  return NBodyMeasure(nu.grid(), k, Mode::multiset, std::move(w), budget);
}

Mixture empirical_mixture(const NBodyMeasure& gamma) {
  if (gamma.mode() != Mode::multiset) {
    throw DomainError("empirical_mixture: exchangeable (multiset mode) input required");
  }
  const int m = static_cast<int>(gamma.grid()->size());
  const double n = gamma.bodies();
  std::vector<DiscreteMeasure> components;
  std::vector<double> weights;
  std::vector<int> counts(m);
  multiset::first(counts, gamma.bodies());
  std::uint64_t idx = 0;
  do {
    const double w = gamma.weights()[idx++];
    if (w == 0.0) continue;
    std::vector<double> empirical(m);
    for (int i = 0; i < m; ++i) empirical[i] = counts[i] / n;
    components.emplace_back(gamma.grid(), std::move(empirical));
    weights.push_back(w);
  } while (multiset::next(counts));
  return Mixture(std::move(components), std::move(weights));
}

NBodyMeasure lift_marginal(const NBodyMeasure& gamma, int k, std::uint64_t budget) {
  return mixture_product_marginal(empirical_mixture(gamma), k, budget);
}

LiftTvCheck lift_tv_check(const NBodyMeasure& gamma) {
  const int n = gamma.bodies();
  const auto lift = empirical_mixture(gamma);
  const double tv = tv_distance(marginal2(gamma), mixture_pair_marginal(lift));
  const double m1 = tv_distance(marginal1(gamma), mixture_mean(lift));
  const double bound = 2.0 / n;
  return LiftTvCheck{tv, bound, m1, tv <= bound + kNormTolerance && m1 <= kNormTolerance};
}

LiftTvCheckK lift_tv_check_k(const NBodyMeasure& gamma, int k) {
  const int n = gamma.bodies();
  if (k < 2 || k > n) throw DomainError("lift_tv_check_k: need 2 <= k <= N");
  const double tv = tv_distance(marginal(gamma, k), lift_marginal(gamma, k));
  const double bound = static_cast<double>(k) * (k - 1) / n;
  return LiftTvCheckK{k, tv, bound, tv <= bound + kNormTolerance};
}

}  // namespace mmot
