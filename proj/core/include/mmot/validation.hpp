#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mmot::validation {

struct SuiteResult {
  std::string name;
  int checked = 0;
  int violations = 0;
  std::vector<std::string> notes;
};

// Runs every module's invariant suite on seeded random instances.
std::vector<SuiteResult> run_all(std::uint64_t seed);

// Prints one line per suite; returns the total violation count.
int run_and_print(std::uint64_t seed, std::ostream& out);

}  // namespace mmot::validation
