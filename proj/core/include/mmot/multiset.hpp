#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mmot::multiset {

// Exact binomial coefficient in 64 bits; throws BudgetError on overflow.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Number of size-`size` multisets over an `alphabet`-letter alphabet,
// C(alphabet + size - 1, size).
std::uint64_t count(int alphabet, int size);

// Multisets over {0, ..., alphabet-1} are handled as count vectors (length
// `alphabet`, nonnegative entries summing to the multiset size). They are
// enumerated in lexicographic order of the corresponding nondecreasing index
// tuple: for alphabet {0,1} and size 3 the order is
// {0,0,0}, {0,0,1}, {0,1,1}, {1,1,1}.
void first(std::span<int> counts, int size);
bool next(std::span<int> counts);

// Position of a multiset in the enumeration above, and its inverse.
std::uint64_t rank(std::span<const int> counts);
std::vector<int> unrank(int alphabet, int size, std::uint64_t r);

// Number of distinct orderings of the multiset (the multinomial coefficient
// n! / prod(counts_i!)) as a double. Exact while representable in 53 bits,
// relative error around 1e-15 beyond that.
double orderings(std::span<const int> counts);

// Expands the count vector to the nondecreasing index tuple.
std::vector<int> to_tuple(std::span<const int> counts);

// Aggregates an index tuple (any order) into a count vector.
std::vector<int> to_counts(std::span<const int> tuple, int alphabet);

}  // namespace mmot::multiset
