#pragma once

#include <string>
#include <vector>

#include "stieltjes/rs_sums.hpp"

namespace stieltjes {

struct OptimizeResult {
    Partition partition;
    double lower_sum;
    double gap; // reference integral minus lower_sum
    std::string method;
    int iterations;
};

struct RateRow {
    int n;
    double gap;
    double scaled_gap; // n * gap
};

struct RateReport {
    std::vector<RateRow> rows;
    double constant;     // 1/2 (integral of sqrt(|f'| g'))^2
    double extrapolated; // accelerated limit of n * gap
    double relative_error;
};

/// The theorem's constant C = 1/2 (integral of sqrt(|f'(t)| g'(t)) dt)^2,
/// by adaptive quadrature with breakpoints forced at f' zeros (the
/// integrand has square-root kinks there). Tolerance 1e-10.
double asymptotic_constant(const FunctionPair& fp);

/// Equalized partition for the weights sqrt(|f'|), sqrt(g'): the
/// construction whose gap meets the limit bound. Falls back to the
/// uniform partition when f is constant (every partition is optimal).
Partition near_optimal_partition(const FunctionPair& fp, int n);

/// Maximize the lower sum over n-divisions: cyclic coordinate ascent on
/// the interior breakpoints from the equalized start, each line search
/// by multistart golden-section on the two adjacent contributions.
/// Stagnation counts as success; the best partition found is returned.
OptimizeResult optimize(const FunctionPair& fp, int n);

/// Exhaustive dynamic program over partitions with breakpoints on a
/// uniform grid of `grid` points (grid <= 2048, n <= 64): the testing
/// oracle for optimize. Throws validation_error when grid < n + 1.
OptimizeResult optimize_grid_dp(const FunctionPair& fp, int n, int grid);

/// gap_n = optimize(fp, n).gap for each n, the constant C, and the
/// Aitken-accelerated limit of n gap_n.
RateReport rate_study(const FunctionPair& fp, const std::vector<int>& n_list);

} // namespace stieltjes
