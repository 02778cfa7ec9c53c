#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mmot/cost.hpp"
#include "mmot/errors.hpp"
#include "mmot/fourier.hpp"
#include "mmot/solver.hpp"

using namespace mmot;

TEST_SUITE_BEGIN("cost");

TEST_CASE("built-in evaluators") {
  const std::vector<double> zero{0.0};
  const std::vector<double> one{1.0};
  CHECK(CostFunction::coulomb().ell(zero) == std::numeric_limits<double>::infinity());
  CHECK(CostFunction::coulomb().ell(std::vector<double>{0.5}) == 2.0);
  CHECK(CostFunction::coulomb_regularized(0.25).ell(zero) == 4.0);
  CHECK(CostFunction::coulomb_regularized(0.25).ell(one) == 1.0);
  CHECK(CostFunction::gaussian(1.0 / std::sqrt(2.0)).ell(one) == doctest::Approx(th::kE1));
  CHECK(CostFunction::quadratic().ell(std::vector<double>{-2.0}) == 4.0);
  const auto tq = CostFunction::truncated_quadratic(2.0);
  CHECK(tq.ell(zero) == 0.0);
  CHECK(tq.ell(one) == doctest::Approx(std::exp(-0.125) - std::exp(-2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(CostFunction::truncated_quadratic(1.0), DomainError);
}

TEST_CASE("evenness on random displacements") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coord(-4.0, 4.0);
  for (const auto& c : {CostFunction::gaussian(0.8), CostFunction::truncated_quadratic(1.5),
                        CostFunction::coulomb_regularized(0.1), CostFunction::quadratic()}) {
    for (int t = 0; t < 1000; ++t) {
      const std::vector<double> z{coord(rng), coord(rng)};
      const std::vector<double> neg{-z[0], -z[1]};
      CHECK(c.ell(z) == c.ell(neg));
    }
  }
}

TEST_CASE("pair cost integral") {
  const auto g = th::grid01();
  const auto gauss = CostFunction::gaussian(1.0 / std::sqrt(2.0));
  SUBCASE("anticorrelated pair under the gaussian cost") {
    std::vector<double> w(4, 0.0);
    w[1] = 0.5;
    w[2] = 0.5;
    CHECK(pair_cost_integral(gauss, PairMeasure(g, w)) ==
          doctest::Approx(th::kE1).epsilon(1e-12));
  }
  SUBCASE("coulomb on a diagonal atom is infinite") {
    std::vector<double> w(4, 0.0);
    w[0] = 1.0;
    CHECK(pair_cost_integral(CostFunction::coulomb(), PairMeasure(g, w)) ==
          std::numeric_limits<double>::infinity());
  }
  SUBCASE("zero mass on the singularity never contributes") {
    std::vector<double> w(4, 0.0);
    w[1] = 0.5;
    w[2] = 0.5;
    CHECK(pair_cost_integral(CostFunction::coulomb(), PairMeasure(g, w)) == 1.0);
  }
  SUBCASE("truncated quadratic vanishes on any diagonal") {
    const auto mu = th::uniform01();
    CHECK(pair_cost_integral(CostFunction::truncated_quadratic(2.0), diagonal_pair(mu)) == 0.0);
  }
}

TEST_CASE("nbody cost on small configurations") {
  const auto gauss = CostFunction::gaussian(1.0 / std::sqrt(2.0));
  SUBCASE("three unit-distance bodies under coulomb") {
    // equilateral triangle in the plane
    const auto g = make_grid(2, {{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2}});
    std::vector<int> tuple{0, 1, 2};
    const auto gamma = symmetrize(NBodyMeasure::dirac_tuple(g, tuple));
    CHECK(nbody_cost(CostFunction::coulomb(), gamma) == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("product of uniform two-point, N = 2") {
    const auto gamma = product_measure(th::uniform01(), 2);
    CHECK(nbody_cost(gauss, gamma) ==
          doctest::Approx((1.0 + th::kE1) / 2).epsilon(1e-13));
  }
  SUBCASE("single multiset {0,0,1}") {
    std::vector<double> w(4, 0.0);
    w[1] = 1.0;
    const NBodyMeasure gamma(th::grid01(), 3, Mode::multiset, std::move(w));
    CHECK(nbody_cost(gauss, gamma) == doctest::Approx(1.0 + 2 * th::kE1).epsilon(1e-13));
  }
}

TEST_CASE("nbody cost equals C(N,2) times the pair integral of the 2-marginal") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 50; ++t) {
    const int m = 2 + static_cast<int>(rng() % 3);
    const int n = 3 + static_cast<int>(rng() % 3);
    std::vector<double> coords(m);
    for (int i = 0; i < m; ++i) coords[i] = i * 0.75;
    const auto g = th::line(coords);
    const auto gamma = th::random_exchangeable(rng, g, n);
    const auto c = CostFunction::gaussian(0.9);
    const double lhs = nbody_cost(c, gamma);
    const double rhs = pairs_of(n) * pair_cost_integral(c, marginal2(gamma));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("nbody cost is invariant under symmetrization") {
  std::mt19937_64 rng(23);
  const auto g = th::line({0.0, 0.5, 1.25});
  const auto c = CostFunction::gaussian(0.7);
  for (int t = 0; t < 30; ++t) {
    const NBodyMeasure dense(g, 3, Mode::dense, th::random_simplex(rng, 27));
    const double before = nbody_cost(c, dense);
    const double after = nbody_cost(c, symmetrize(dense));
    CHECK(std::abs(before - after) <= 1e-12 * (1.0 + std::abs(before)));
  }
}

TEST_CASE("spectrum classification") {
  SUBCASE("gaussian is strictly positive on the working torus") {
    const auto torus = make_torus_grid(1, 16, 8.0);
    const auto r = classify_positive_definite(CostFunction::gaussian(1.0 / std::sqrt(2.0)), *torus);
    CHECK(r.verdict == SpectrumClass::strictly_positive);
    CHECK(r.min_coefficient > 1e-10);
  }
  SUBCASE("truncated quadratic is indefinite on a fine grid over [-8, 8)") {
    const auto torus = make_torus_grid(1, 64, 16.0);
    const auto r = classify_positive_definite(CostFunction::truncated_quadratic(2.0), *torus);
    CHECK(r.verdict == SpectrumClass::indefinite);
    CHECK(r.min_coefficient < -1e-10);
  }
  SUBCASE("constant cost is positive but not strictly") {
    const CostFunction one("one", [](std::span<const double>) { return 1.0; },
                           CostFunction::Flags{});
    const auto torus = make_torus_grid(1, 16, 8.0);
    const auto r = classify_positive_definite(one, *torus);
    CHECK(r.verdict == SpectrumClass::positive);
    // single nonzero coefficient at frequency zero
    int nonzero = 0;
    for (const double v : r.spectrum) {
      if (std::abs(v) > 1e-10) ++nonzero;
    }
    CHECK(nonzero == 1);
    CHECK(r.spectrum[0] == doctest::Approx(8.0));  // L * mean of 1
  }
  SUBCASE("non-torus grids are rejected") {
    const auto g = th::grid01();
    CHECK_THROWS_AS((void)classify_positive_definite(CostFunction::quadratic(), *g), DomainError);
  }
}

TEST_CASE("tabulated costs look up grid differences") {
  const auto c = CostFunction::tabulated({{{0.0}, 0.5}, {{1.0}, 2.0}});
  CHECK(c.ell(std::vector<double>{0.0}) == 0.5);
  CHECK(c.ell(std::vector<double>{1.0}) == 2.0);
  CHECK(c.ell(std::vector<double>{-1.0}) == 2.0);  // evenness is implied
  CHECK_THROWS_AS((void)c.ell(std::vector<double>{0.3}), DomainError);
}

TEST_CASE("cost parsing") {
  CHECK(CostFunction::parse("gaussian:s=0.7071").name() == "gaussian");
  CHECK(CostFunction::parse("coulomb").flags().singular_at_zero);
  CHECK(CostFunction::parse("truncated_quadratic:sigma=2").parameters().at("sigma") == 2.0);
  CHECK_THROWS_AS(CostFunction::parse("gaussian"), ConfigError);          // missing s
  CHECK_THROWS_AS(CostFunction::parse("gaussian:s=1,zeta=2"), ConfigError);
  CHECK_THROWS_AS(CostFunction::parse("warp:x=1"), ConfigError);
}

TEST_SUITE_END();
