#pragma once

#include <vector>

#include "mmot/measure.hpp"

namespace mmot {

// Finitely supported mixing measure over one-body measures on a shared grid:
// nu = sum_a nu_a delta_{Q_a}. This is the computable fragment of a mixing
// measure on measure space; every pair marginal it induces is representable
// at every order by construction.
class Mixture {
 public:
  Mixture(std::vector<DiscreteMeasure> components, std::vector<double> weights);

  std::size_t size() const noexcept { return components_.size(); }
  const DiscreteMeasure& component(std::size_t a) const { return components_[a]; }
  double weight(std::size_t a) const { return weights_[a]; }
  std::span<const double> weights() const noexcept { return weights_; }
  const GridPtr& grid() const { return components_.front().grid(); }

 private:
  std::vector<DiscreteMeasure> components_;
  std::vector<double> weights_;
};

// sum_a nu_a Q_a (x) Q_a: symmetric, and representable at every order.
PairMeasure mixture_pair_marginal(const Mixture& nu);

// Barycenter sum_a nu_a Q_a.
DiscreteMeasure mixture_mean(const Mixture& nu);

// k-fold product mixture sum_a nu_a Q_a^{(x) k} in multiset mode.
NBodyMeasure mixture_product_marginal(const Mixture& nu, int k,
                                      std::uint64_t budget = kDefaultBudget);

// The mixture of empirical measures of an exchangeable measure: one
// component per support multiset, with the multiset's counts/N as the
// component and its weight as the mixing weight. The k-marginals of the
// induced infinite exchangeable measure are mixture_product_marginal(.., k).
Mixture empirical_mixture(const NBodyMeasure& gamma);

// k-point marginal of the empirical-measure lift of gamma.
NBodyMeasure lift_marginal(const NBodyMeasure& gamma, int k,
                           std::uint64_t budget = kDefaultBudget);

struct LiftTvCheck {
  double tv;            // tv_distance between the 2-marginals (sum |diff|)
  double bound;         // 2/N in this convention
  double marginal1_tv;  // must vanish: the lift preserves the 1-marginal
  bool pass;
};

// Checks the pair-marginal approximation guarantee of the empirical lift:
// the exact mixture identity P_2 = (1-1/N) gamma_2 + (1/N) diag(gamma_1)
// bounds the total variation sum |gamma_2 - P_2| by 2/N (equivalently 1/N
// in the probabilists' normalization tv/2).
LiftTvCheck lift_tv_check(const NBodyMeasure& gamma);

struct LiftTvCheckK {
  int k;
  double tv;
  double bound;  // k(k-1)/N, checked empirically
  bool pass;
};

// Empirical check of the k-marginal rate k(k-1)/N (same tv convention).
LiftTvCheckK lift_tv_check_k(const NBodyMeasure& gamma, int k);

}  // namespace mmot
