#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mmot/errors.hpp"
#include "mmot/representability.hpp"

using namespace mmot;

namespace {

PairMeasure anticorrelated() {
  std::vector<double> w(4, 0.0);
  w[0 * 2 + 1] = 0.5;
  w[1 * 2 + 0] = 0.5;
  return PairMeasure(th::grid01(), std::move(w));
}

}  // namespace

TEST_SUITE_BEGIN("representability");

TEST_CASE("anticorrelated pair: feasible at 2, refuted at 3 with a certificate") {
  const auto mu2 = anticorrelated();

  const auto at2 = is_n_representable(mu2, 2);
  CHECK(at2.feasible);
  REQUIRE(at2.witness.has_value());
  CHECK(tv_distance(marginal2(*at2.witness), mu2) <= 1e-9);

  const auto at3 = is_n_representable(mu2, 3);
  REQUIRE_FALSE(at3.feasible);
  CHECK_FALSE(at3.numerically_marginal);
  double margin = 0.0;
  CHECK(verify_representability_certificate(mu2, 3, at3.farkas, 1e-9, &margin));
  CHECK(margin > 1e-7);
}

TEST_CASE("asymmetric pair measures are rejected") {
  std::vector<double> w(4, 0.0);
  w[0 * 2 + 1] = 1.0;
  const PairMeasure lop(th::grid01(), std::move(w));
  CHECK_THROWS_AS((void)is_n_representable(lop, 3), DomainError);
}

TEST_CASE("product pair measures are representable at every order tried") {
  std::mt19937_64 rng(71);
  const auto g = th::line({0.0, 1.0, 2.0});
  for (int t = 0; t < 3; ++t) {
    const auto mu = th::random_measure(rng, g);
    const auto mu2 = tensor_pair(mu, mu);
    for (int n = 2; n <= 8; ++n) {
      const auto answer = is_n_representable(mu2, n);
      CHECK(answer.feasible);
    }
  }
}

TEST_CASE("witness round trip on random marginals of exchangeable measures") {
  std::mt19937_64 rng(73);
  for (int t = 0; t < 100; ++t) {
    const int m = 2 + static_cast<int>(rng() % 4);  // up to 5 points
    const int k = 2 + static_cast<int>(rng() % 5);  // up to 6 bodies
    std::vector<double> coords(m);
    for (int i = 0; i < m; ++i) coords[i] = i;
    const auto gamma = th::random_exchangeable(rng, th::line(coords), k);
    const auto mu2 = marginal2(gamma);
    const auto answer = is_n_representable(mu2, k);
    REQUIRE(answer.feasible);
    CHECK(tv_distance(marginal2(*answer.witness), mu2) <= 1e-7);
  }
}

TEST_CASE("monotonicity of representability") {
  const auto mu2 = anticorrelated();
  SUBCASE("vacuous when both infeasible") {
    const auto verdict = monotonicity_check(mu2, 4, 3);
    CHECK_FALSE(verdict.n_representable);
    CHECK_FALSE(verdict.m_representable);
    CHECK(verdict.implication_holds);
  }
  SUBCASE("product measures are representable down the chain") {
    const auto mu = th::uniform01();
    const auto verdict = monotonicity_check(tensor_pair(mu, mu), 6, 3);
    CHECK(verdict.n_representable);
    CHECK(verdict.m_representable);
    CHECK(verdict.implication_holds);
  }
  SUBCASE("construct-then-project fuzz") {
    std::mt19937_64 rng(79);
    for (int t = 0; t < 20; ++t) {
      const auto gamma = th::random_exchangeable(rng, th::grid01(), 3);
      const auto verdict = monotonicity_check(marginal2(gamma), 3, 2);
      CHECK(verdict.n_representable);
      CHECK(verdict.m_representable);
      CHECK(verdict.implication_holds);
    }
  }
}

TEST_CASE("hierarchy values") {
  const auto mu = th::uniform01();
  const auto gauss = CostFunction::gaussian(1.0 / std::sqrt(2.0));
  const int bodies = 4;
  SUBCASE("k = 2 is the unconstrained symmetric pair optimum") {
    CHECK(hierarchy_value(mu, bodies, 2, gauss) ==
          doctest::Approx(6 * th::kE1).epsilon(1e-9));
  }
  SUBCASE("k = N recovers the full value") {
    CHECK(hierarchy_value(mu, bodies, bodies, gauss) ==
          doctest::Approx(sce_value(mu, bodies, gauss)).epsilon(1e-9));
  }
  SUBCASE("chain is nondecreasing through and past N") {
    double prev = -1.0;
    for (int k = 2; k <= 8; ++k) {
      const double v = hierarchy_value(mu, bodies, k, gauss);
      CHECK(v >= prev - 1e-9);
      prev = v;
    }
    // k -> infinity approaches C(N,2) * mean field
    const double limit = pairs_of(bodies) * mean_field_value(mu, gauss);
    CHECK(prev <= limit + 1e-9);
    CHECK(limit - prev < 0.1 * limit);
  }
}

TEST_CASE("infinite representability probe") {
  SUBCASE("anticorrelated is refuted at exactly 3") {
    const auto probe = infinite_representability_probe(anticorrelated(), 6);
    CHECK_FALSE(probe.representable_up_to_k_max);
    CHECK(probe.refuted_at == 3);
  }
  SUBCASE("products survive") {
    const auto mu = th::uniform01();
    const auto probe = infinite_representability_probe(tensor_pair(mu, mu), 6);
    CHECK(probe.representable_up_to_k_max);
  }
}

TEST_SUITE_END();
