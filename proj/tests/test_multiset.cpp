#include <doctest.h>

#include <random>

#include "mmot/errors.hpp"
#include "mmot/multiset.hpp"

using namespace mmot;

TEST_SUITE_BEGIN("multiset");

TEST_CASE("counts and binomials") {
  CHECK(multiset::binomial(5, 2) == 10);
  CHECK(multiset::binomial(41, 11) == 3'159'461'968ull);
  CHECK(multiset::count(2, 3) == 4);
  CHECK(multiset::count(4, 6) == 84);
  CHECK(multiset::count(12, 30) == multiset::binomial(41, 30));
  CHECK_THROWS_AS((void)multiset::binomial(200, 100), BudgetError);
}

TEST_CASE("enumeration order matches the nondecreasing tuple order") {
  std::vector<int> counts(2);
  multiset::first(counts, 3);
  CHECK(counts == std::vector<int>{3, 0});
  REQUIRE(multiset::next(counts));
  CHECK(counts == std::vector<int>{2, 1});
  REQUIRE(multiset::next(counts));
  CHECK(counts == std::vector<int>{1, 2});
  REQUIRE(multiset::next(counts));
  CHECK(counts == std::vector<int>{0, 3});
  CHECK_FALSE(multiset::next(counts));
}

TEST_CASE("rank and unrank invert each other over the whole enumeration") {
  for (const auto [m, n] : {std::pair{2, 3}, {3, 4}, {5, 3}, {4, 6}}) {
    std::vector<int> counts(m);
    multiset::first(counts, n);
    std::uint64_t expected = 0;
    do {
      CHECK(multiset::rank(counts) == expected);
      CHECK(multiset::unrank(m, n, expected) == counts);
      ++expected;
    } while (multiset::next(counts));
    CHECK(expected == multiset::count(m, n));
  }
}

TEST_CASE("orderings is the multinomial coefficient") {
  CHECK(multiset::orderings(std::vector<int>{3, 0}) == 1.0);
  CHECK(multiset::orderings(std::vector<int>{2, 1}) == 3.0);
  CHECK(multiset::orderings(std::vector<int>{1, 1, 1}) == 6.0);
  CHECK(multiset::orderings(std::vector<int>{2, 2}) == 6.0);
  // sum over all multisets of orderings = m^n
  std::vector<int> counts(3);
  multiset::first(counts, 4);
  double total = 0.0;
  do {
    total += multiset::orderings(counts);
  } while (multiset::next(counts));
  CHECK(total == doctest::Approx(81.0).epsilon(1e-14));
}

TEST_CASE("tuple round trip") {
  const std::vector<int> counts{1, 0, 2};
  const auto tuple = multiset::to_tuple(counts);
  CHECK(tuple == std::vector<int>{0, 2, 2});
  CHECK(multiset::to_counts(tuple, 3) == counts);
}

TEST_SUITE_END();
