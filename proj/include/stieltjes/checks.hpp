#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stieltjes/function_space.hpp"

namespace stieltjes {

struct SuiteResult {
    std::string name;
    int passed = 0;
    int failed = 0;
    std::string detail; // first failure, empty when clean
};

struct CheckReport {
    std::vector<SuiteResult> suites;
    bool all_passed() const;
    int total_failed() const;
};

/// The randomized inequality suites on one pair, deterministic under a
/// fixed seed: per-interval gap bound, second-order local expansion on
/// sign-definite subintervals, refinement monotonicity, minimality of
/// the lower sum over tag choices, and additivity of the gap.
CheckReport run_invariant_suites(const FunctionPair& fp, std::uint64_t seed, int cases);

} // namespace stieltjes
