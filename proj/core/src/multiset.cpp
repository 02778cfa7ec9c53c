#include "mmot/multiset.hpp"

#include <algorithm>
#include <numeric>

#include "mmot/errors.hpp"

namespace mmot::multiset {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t factor = n - k + i;
    // multiply then divide; the intermediate product is always divisible by i
    if (result > UINT64_MAX / factor) {
      throw BudgetError("binomial coefficient overflows 64 bits");
    }
    result = result * factor / i;
  }
  return result;
}

std::uint64_t count(int alphabet, int size) {
  if (alphabet < 1 || size < 0) throw DomainError("multiset::count: bad arguments");
  return binomial(static_cast<std::uint64_t>(alphabet) + size - 1, size);
}

void first(std::span<int> counts, int size) {
  std::fill(counts.begin(), counts.end(), 0);
  counts[0] = size;
}

bool next(std::span<int> counts) {
  const int m = static_cast<int>(counts.size());
  // find the rightmost index below the last with remaining mass
  int j = m - 2;
  while (j >= 0 && counts[j] == 0) --j;
  if (j < 0) return false;  // all mass in the last slot: enumeration done
  int tail = 0;
  for (int i = j + 1; i < m; ++i) {
    tail += counts[i];
    counts[i] = 0;
  }
  counts[j] -= 1;
  counts[j + 1] = tail + 1;
  return true;
}

std::uint64_t rank(std::span<const int> counts) {
  const int m = static_cast<int>(counts.size());
  const int n = std::accumulate(counts.begin(), counts.end(), 0);
  std::uint64_t r = 0;
  int low = 0;
  int remaining = n;
  for (int letter = 0; letter < m; ++letter) {
    for (int rep = 0; rep < counts[letter]; ++rep) {
      // tuples agreeing so far whose next entry is v < letter
      for (int v = low; v < letter; ++v) {
        r += count(m - v, remaining - 1);
      }
      low = letter;
      --remaining;
    }
  }
  return r;
}

std::vector<int> unrank(int alphabet, int size, std::uint64_t r) {
  std::vector<int> counts(alphabet, 0);
  int low = 0;
  for (int pos = 0; pos < size; ++pos) {
    const int remaining = size - pos;
    int v = low;
    for (;; ++v) {
      const std::uint64_t block = count(alphabet - v, remaining - 1);
      if (r < block) break;
      r -= block;
    }
    ++counts[v];
    low = v;
  }
  if (r != 0) throw DomainError("multiset::unrank: rank out of range");
  return counts;
}

double orderings(std::span<const int> counts) {
  // product of binomials C(c_1, c_1) * C(c_1+c_2, c_2) * ...
  double result = 1.0;
  int seen = 0;
  for (const int c : counts) {
    seen += c;
    double b = 1.0;
    for (int i = 1; i <= c; ++i) b *= static_cast<double>(seen - c + i) / i;
    result *= b;
  }
  return result;
}

std::vector<int> to_tuple(std::span<const int> counts) {
  std::vector<int> tuple;
  for (int letter = 0; letter < static_cast<int>(counts.size()); ++letter) {
    tuple.insert(tuple.end(), counts[letter], letter);
  }
  return tuple;
}

std::vector<int> to_counts(std::span<const int> tuple, int alphabet) {
  std::vector<int> counts(alphabet, 0);
  for (const int v : tuple) {
    if (v < 0 || v >= alphabet) throw DomainError("multiset::to_counts: index out of range");
    ++counts[v];
  }
  return counts;
}

}  // namespace mmot::multiset
