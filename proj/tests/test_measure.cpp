#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "mmot/errors.hpp"
#include "mmot/measure.hpp"

using namespace mmot;

TEST_SUITE_BEGIN("measure");

TEST_CASE("construction rejects bad weights") {
  const auto g = th::grid01();
  CHECK_THROWS_AS(DiscreteMeasure(g, {0.5, 0.6}), DomainError);     // sum != 1
  CHECK_THROWS_AS(DiscreteMeasure(g, {-0.1, 1.1}), DomainError);    // negative
  CHECK_THROWS_AS(DiscreteMeasure(g, {1.0}), DomainError);          // wrong length
  CHECK_NOTHROW(DiscreteMeasure(g, {0.5, 0.5 + 0.5e-9}));           // inside tolerance
  CHECK_THROWS_AS(DiscreteMeasure(g, {0.5, 0.5 + 1e-8}), DomainError);
}

TEST_CASE("grids reject duplicates and bad periodic coordinates") {
  CHECK_THROWS_AS(SupportGrid::line({0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(SupportGrid::line({0.0, 9.0}, 8.0), DomainError);
  CHECK_NOTHROW(SupportGrid::line({0.0, 7.5}, 8.0));
}

TEST_CASE("product of a Dirac is a Dirac") {
  const auto g = th::line({0.0, 1.0, 2.0});
  const auto prod = product_measure(DiscreteMeasure::dirac(g, 0), 3);
  CHECK(prod.multiset_weight(std::vector<int>{3, 0, 0}) == 1.0);
  CHECK(tv_distance(marginal1(prod), DiscreteMeasure::dirac(g, 0)) == 0.0);
}

TEST_CASE("product of uniform on two points is binomial") {
  const auto mu = th::uniform01();
  SUBCASE("N = 2") {
    const auto prod = product_measure(mu, 2);
    CHECK(prod.multiset_weight(std::vector<int>{2, 0}) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(prod.multiset_weight(std::vector<int>{1, 1}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(prod.multiset_weight(std::vector<int>{0, 2}) == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("N = 3 cross-checked by full tuple enumeration") {
    // oracle: aggregate all 2^3 equally likely tuples by their multiset
    double by_ones[4] = {0, 0, 0, 0};
    for (int t = 0; t < 8; ++t) {
      by_ones[__builtin_popcount(static_cast<unsigned>(t))] += 1.0 / 8.0;
    }
    const auto prod = product_measure(mu, 3);
    CHECK(prod.multiset_weight(std::vector<int>{3, 0}) == doctest::Approx(by_ones[0]));
    CHECK(prod.multiset_weight(std::vector<int>{2, 1}) == doctest::Approx(by_ones[1]));
    CHECK(prod.multiset_weight(std::vector<int>{1, 2}) == doctest::Approx(by_ones[2]));
    CHECK(prod.multiset_weight(std::vector<int>{0, 3}) == doctest::Approx(by_ones[3]));
  }
}

TEST_CASE("marginal of the anticorrelated pair is uniform") {
  const auto g = th::grid01();
  std::vector<double> w(4, 0.0);
  w[0 * 2 + 1] = 0.5;
  w[1 * 2 + 0] = 0.5;
  const NBodyMeasure gamma(g, 2, Mode::dense, std::move(w));
  CHECK(tv_distance(marginal1(gamma), th::uniform01()) == 0.0);
}

TEST_CASE("pair marginal of a two-multiset mixture matches tuple expansion") {
  // weights 1/2 on {0,0,1} and 1/2 on {0,1,1}; expand to tuples, project the
  // first two slots, aggregate
  const auto g = th::grid01();
  std::vector<double> w(4, 0.0);
  w[1] = 0.5;  // {0,0,1}
  w[2] = 0.5;  // {0,1,1}
  const NBodyMeasure gamma(g, 3, Mode::multiset, std::move(w));
  const auto pair = marginal2(gamma);
  CHECK(pair(0, 0) == doctest::Approx(1.0 / 6).epsilon(1e-14));
  CHECK(pair(0, 1) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(pair(1, 0) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(pair(1, 1) == doctest::Approx(1.0 / 6).epsilon(1e-14));

  // independent oracle: expand the multisets into equally weighted tuples
  double dense[2][2] = {{0, 0}, {0, 0}};
  const int tuples_001[][3] = {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}};
  const int tuples_011[][3] = {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  for (const auto& t : tuples_001) dense[t[0]][t[1]] += 0.5 / 3.0;
  for (const auto& t : tuples_011) dense[t[0]][t[1]] += 0.5 / 3.0;
  CHECK(pair(0, 0) == doctest::Approx(dense[0][0]).epsilon(1e-14));
  CHECK(pair(0, 1) == doctest::Approx(dense[0][1]).epsilon(1e-14));
}

TEST_CASE("marginal of the product is the product") {
  const auto mu = th::uniform01();
  const auto prod = product_measure(mu, 4);
  CHECK(tv_distance(marginal1(prod), mu) <= 1e-15);
  CHECK(tv_distance(marginal(prod, 2), product_measure(mu, 2)) <= 1e-14);
  CHECK(tv_distance(marginal(prod, 3), product_measure(mu, 3)) <= 1e-14);
}

TEST_CASE("symmetrize") {
  const auto g = th::grid01();
  SUBCASE("two-point Dirac becomes the anticorrelated average") {
    const int tuple[] = {0, 1};
    const auto sym = symmetrize(NBodyMeasure::dirac_tuple(g, tuple));
    CHECK(sym.multiset_weight(std::vector<int>{1, 1}) == 1.0);
    const auto dense = to_dense(sym);
    CHECK(dense.weights()[1] == doctest::Approx(0.5));
    CHECK(dense.weights()[2] == doctest::Approx(0.5));
  }
  SUBCASE("Dirac at (A,A,B) spreads over the three orderings") {
    const int tuple[] = {0, 0, 1};
    const auto dense = to_dense(symmetrize(NBodyMeasure::dirac_tuple(g, tuple)));
    // 3 distinct orderings out of 3! = 6 permutations
    int hits = 0;
    for (const double v : dense.weights()) {
      if (v != 0.0) {
        CHECK(v == doctest::Approx(1.0 / 3));
        ++hits;
      }
    }
    CHECK(hits == 3);
  }
  SUBCASE("idempotent on exchangeable input") {
    std::mt19937_64 rng(7);
    const auto gamma = th::random_exchangeable(rng, g, 4);
    CHECK(tv_distance(symmetrize(to_dense(gamma)), gamma) <= 1e-14);
  }
}

TEST_CASE("sampled symmetry check accepts symmetric and rejects asymmetric") {
  const auto g = th::grid01();
  const int tuple[] = {0, 1, 1};
  const auto asym = NBodyMeasure::dirac_tuple(g, tuple);
  CHECK_FALSE(sampled_symmetry_check(asym, 1));
  CHECK(sampled_symmetry_check(to_dense(symmetrize(asym)), 1));
}

TEST_CASE("tv distance") {
  const auto g = th::grid01();
  const auto mu = th::uniform01();
  CHECK(tv_distance(mu, mu) == 0.0);
  CHECK(tv_distance(DiscreteMeasure::dirac(g, 0), DiscreteMeasure::dirac(g, 1)) == 2.0);
  // product vs diagonal on the uniform two-point measure
  CHECK(tv_distance(tensor_pair(mu, mu), diagonal_pair(mu)) == doctest::Approx(1.0));
  const auto g3 = th::line({0.0, 1.0, 2.0});
  CHECK_THROWS_AS((void)tv_distance(DiscreteMeasure::uniform(g3), mu), DomainError);
}

TEST_CASE("tv distance is a metric on random instances") {
  std::mt19937_64 rng(11);
  const auto g = th::line({0.0, 1.0, 2.0, 3.0});
  for (int t = 0; t < 100; ++t) {
    const auto a = th::random_measure(rng, g);
    const auto b = th::random_measure(rng, g);
    const auto c = th::random_measure(rng, g);
    CHECK(tv_distance(a, b) == tv_distance(b, a));
    CHECK(tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c) + 1e-12);
  }
}

TEST_CASE("diagonal pushforward") {
  const auto g = th::line({0.0, 1.0, 2.0});
  const auto mu = DiscreteMeasure(g, {0.2, 0.3, 0.5});
  SUBCASE("dirac in, dirac out") {
    const auto d = diagonal_pushforward(DiscreteMeasure::dirac(g, 0), 2);
    CHECK(d.multiset_weight(std::vector<int>{2, 0, 0}) == 1.0);
  }
  SUBCASE("uniform two-point diagonal") {
    const auto d = diagonal_pushforward(th::uniform01(), 2);
    CHECK(d.multiset_weight(std::vector<int>{2, 0}) == 0.5);
    CHECK(d.multiset_weight(std::vector<int>{0, 2}) == 0.5);
  }
  SUBCASE("marginal recovers the base measure") {
    CHECK(tv_distance(marginal1(diagonal_pushforward(mu, 5)), mu) <= 1e-15);
  }
}

TEST_CASE("mixed-mode tv compares on the dense expansion") {
  std::mt19937_64 rng(3);
  const auto g = th::grid01();
  const auto gamma = th::random_exchangeable(rng, g, 3);
  CHECK(tv_distance(gamma, to_dense(gamma)) <= 1e-15);
}

TEST_SUITE_END();
