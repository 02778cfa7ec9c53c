#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mmot/errors.hpp"
#include "mmot/solver.hpp"

using namespace mmot;

TEST_SUITE_BEGIN("solver");

namespace {
const CostFunction kGauss = CostFunction::gaussian(1.0 / std::sqrt(2.0));  // exp(-z^2)
}

TEST_CASE("two-point gaussian ladder matches the brute-force oracle") {
  const auto mu = th::uniform01();
  // oracle values from support-enumeration, computed before asserting the LP
  for (int n = 2; n <= 10; ++n) {
    const double oracle = th::two_point_oracle(0.5, n, 1.0, th::kE1, 1.0);
    const int half = (n + 1) / 2;
    const double closed_form = ((half - 1) + half * th::kE1) / (2 * half - 1);
    REQUIRE(oracle == doctest::Approx(closed_form).epsilon(1e-14));

    const auto report = solve_mmot(mu, n, kGauss);
    CHECK(report.value_per_pair == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(report.lp_stats.status == lp::Status::optimal);
    REQUIRE(report.optimal_nbody.has_value());
    CHECK(tv_distance(marginal1(*report.optimal_nbody), mu) <= 1e-8);
  }
}

TEST_CASE("frozen ladder values") {
  const auto mu = th::uniform01();
  CHECK(solve_mmot(mu, 2, kGauss).value_per_pair ==
        doctest::Approx(0.36787944117144233).epsilon(1e-10));
  CHECK(solve_mmot(mu, 3, kGauss).value_per_pair ==
        doctest::Approx(0.57858629411429489).epsilon(1e-10));
  CHECK(solve_mmot(mu, 4, kGauss).value_per_pair ==
        doctest::Approx(0.57858629411429489).epsilon(1e-10));
  CHECK(solve_mmot(mu, 6, kGauss).value_per_pair ==
        doctest::Approx(0.62072766470286540).epsilon(1e-10));
}

TEST_CASE("optimal N=3 measure mixes the balanced configurations") {
  const auto report = solve_mmot(th::uniform01(), 3, kGauss);
  REQUIRE(report.optimal_nbody.has_value());
  const auto& gamma = *report.optimal_nbody;
  CHECK(gamma.multiset_weight(std::vector<int>{2, 1}) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(gamma.multiset_weight(std::vector<int>{1, 2}) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("truncated quadratic is minimized by the diagonal at zero cost") {
  const auto mu = th::uniform01();
  const auto tq = CostFunction::truncated_quadratic(2.0);
  for (int n = 2; n <= 6; ++n) {
    const auto report = solve_mmot(mu, n, tq);
    CHECK(report.value_per_pair <= 1e-9);
    // the diagonal pushforward achieves exactly zero, so the optimum does
    CHECK(nbody_cost(tq, diagonal_pushforward(mu, n)) == 0.0);
  }
}

TEST_CASE("mean field value") {
  const auto mu = th::uniform01();
  CHECK(mean_field_value(mu, kGauss) == doctest::Approx((1.0 + th::kE1) / 2).epsilon(1e-13));
  const auto g = th::line({0.0, 1.0, 2.0});
  CHECK(mean_field_value(DiscreteMeasure::dirac(g, 1), kGauss) == doctest::Approx(1.0));
  CHECK(mean_field_value(mu, CostFunction::coulomb()) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("coulomb with atoms forced onto the diagonal has value infinity") {
  // three bodies on two sites must double-occupy somewhere
  const auto report = solve_mmot(th::uniform01(), 3, CostFunction::coulomb());
  CHECK(report.infinite);
  CHECK(report.value_per_pair == std::numeric_limits<double>::infinity());
  // two bodies on two sites stay off the diagonal
  const auto ok = solve_mmot(th::uniform01(), 2, CostFunction::coulomb());
  CHECK_FALSE(ok.infinite);
  CHECK(ok.value_per_pair == doctest::Approx(1.0));
}

TEST_CASE("sce value and the trial-function bound") {
  const auto mu = th::uniform01();
  CHECK(sce_value(mu, 2, kGauss) == doctest::Approx(th::kE1).epsilon(1e-10));
  CHECK(sce_value(mu, 4, kGauss) == doctest::Approx(6 * 0.57858629411429489).epsilon(1e-9));
  for (int n = 2; n <= 8; ++n) {
    CHECK(sce_value(mu, n, kGauss) <= pairs_of(n) * mean_field_value(mu, kGauss) + 1e-9);
  }
}

TEST_CASE("monotonicity in N and the mean-field bound") {
  std::mt19937_64 rng(31);
  const auto g = th::line({0.0, 0.8, 2.1});
  for (int t = 0; t < 5; ++t) {
    const auto mu = th::random_measure(rng, g);
    const auto c = CostFunction::gaussian(0.6 + 0.2 * t);
    const double mf = mean_field_value(mu, c);
    double prev = -1.0;
    for (int n = 2; n <= 7; ++n) {
      const double f = solve_mmot(mu, n, c).value_per_pair;
      CHECK(f >= prev - 1e-9);
      CHECK(f <= mf + 1e-9);
      prev = f;
    }
  }
}

TEST_CASE("bounded-cost rate against the mean field") {
  // gap <= sup(c) / N on the support, for gaussian costs
  std::mt19937_64 rng(37);
  for (const auto& coords : {std::vector<double>{0.0, 1.0}, {0.0, 1.0, 2.0},
                             {0.0, 0.5, 1.5, 3.0}}) {
    const auto g = th::line(coords);
    const auto mu = th::random_measure(rng, g);
    const auto c = CostFunction::gaussian(1.0);
    const double mf = mean_field_value(mu, c);
    const double sup = c.sup_on_grid(*g);
    for (int n = 2; n <= 12; ++n) {
      const double f = solve_mmot(mu, n, c).value_per_pair;
      CHECK(mf - f <= sup / n + 1e-9);
    }
  }
}

TEST_CASE("reduced formulation agrees with the direct one") {
  const auto mu = th::uniform01();
  for (int n = 2; n <= 6; ++n) {
    const double direct = solve_mmot(mu, n, kGauss).value_per_pair;
    const auto reduced = solve_reduced(mu, n, kGauss);
    CHECK(std::abs(direct - reduced.value_per_pair) <= 1e-8);
    REQUIRE(reduced.optimal_pair.has_value());
    CHECK(reduced.optimal_pair->is_symmetric());
  }
  std::mt19937_64 rng(41);
  const auto g = th::line({0.0, 0.7, 1.9, 3.2});
  for (int t = 0; t < 8; ++t) {
    const auto mu4 = th::random_measure(rng, g);
    const auto c = CostFunction::gaussian(0.5 + 0.25 * (t % 3));
    const int n = 2 + t % 4;
    CHECK(std::abs(solve_mmot(mu4, n, c).value_per_pair -
                   solve_reduced(mu4, n, c).value_per_pair) <= 1e-8);
  }
}

TEST_CASE("N = 2 reduced program is plain two-marginal transport") {
  const auto report = solve_reduced(th::uniform01(), 2, kGauss);
  CHECK(report.value_per_pair == doctest::Approx(th::kE1).epsilon(1e-10));
  REQUIRE(report.optimal_pair.has_value());
  // anticorrelated optimum
  CHECK((*report.optimal_pair)(0, 1) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK((*report.optimal_pair)(1, 0) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("the N=2 anticorrelated optimum is excluded at N=3") {
  const double f2 = solve_reduced(th::uniform01(), 2, kGauss).value_per_pair;
  const double f3 = solve_reduced(th::uniform01(), 3, kGauss).value_per_pair;
  CHECK(f3 - f2 == doctest::Approx(0.57858629411429489 - th::kE1).epsilon(1e-8));
  CHECK(f3 > f2 + 1e-3);
}

TEST_CASE("strict suboptimality of the product measure at finite N") {
  const auto mu = th::uniform01();
  const double mf = mean_field_value(mu, kGauss);
  for (int n = 2; n <= 12; ++n) {
    CHECK(mf - solve_mmot(mu, n, kGauss).value_per_pair >= 1e-3);
  }
}

TEST_CASE("variable budget is enforced with a helpful error") {
  MmotOptions opts;
  opts.variable_budget = 10;
  CHECK_THROWS_AS((void)solve_mmot(th::uniform01(), 12, kGauss, opts), BudgetError);
  try {
    (void)solve_mmot(th::uniform01(), 12, kGauss, opts);
  } catch (const BudgetError& e) {
    CHECK(std::string(e.what()).find("reduce the support") != std::string::npos);
  }
}

TEST_CASE("solver value equals the cost of the returned measure") {
  std::mt19937_64 rng(47);
  const auto g = th::line({0.0, 1.1, 2.7});
  for (int t = 0; t < 5; ++t) {
    const auto mu = th::random_measure(rng, g);
    const auto report = solve_mmot(mu, 4, kGauss);
    REQUIRE(report.optimal_nbody.has_value());
    const double recomputed = nbody_cost(kGauss, *report.optimal_nbody);
    CHECK(recomputed == doctest::Approx(report.total_cost).epsilon(1e-9));
  }
}

TEST_SUITE_END();
