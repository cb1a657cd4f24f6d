#pragma once

#include <string>
#include <vector>

#include "stieltjes/function_space.hpp"

namespace stieltjes {

/// Partition on which (t_i - t_{i-1}) max w max h takes the same value J
/// on every subinterval, plus convergence diagnostics.
struct EqualizeResult {
    Partition partition;
    double value;     // the common product J
    double residual;  // max_i |J_i - J| / J over the final partition
    int iterations;
    bool converged;
};

/// Reference construction: outer bisection on candidate J, inner
/// left-to-right march (each t_i is the root of the nondecreasing map
/// s -> (s - t_{i-1}) max w max h - J). Requires w >= 0 and not
/// identically zero on any open subinterval, h > 0, n >= 1; throws
/// validation_error otherwise and convergence_error when the march
/// cannot land t_n on b.
EqualizeResult equalize(const Expression& w, const Expression& h, const Interval& iv, int n);

/// Independent cross-check: fixed-point iteration of the simplex
/// normalization map (interval lengths are rescaled toward equal
/// products and renormalized). Non-convergence is reported through
/// `converged`/`residual`, not thrown; the best iterate is returned.
EqualizeResult equalize_fixed_point(const Expression& w, const Expression& h, const Interval& iv,
                                    int n, int max_iter = 10000);

struct LimitRow {
    int n;
    double scaled_value; // n * J_n
};

struct LimitStudy {
    std::vector<LimitRow> rows;
    double reference;    // integral of w h over the interval
    double extrapolated; // Richardson estimate from the last three rows
};

/// n J_n across n_list plus the integral it converges to.
LimitStudy limit_study(const Expression& w, const Expression& h, const Interval& iv,
                       const std::vector<int>& n_list);

/// Richardson extrapolation of a sequence x(n) -> L assuming a leading
/// 1/n error term (two eliminations on the last three rows). Falls back
/// to the last value when fewer rows are available or the formula
/// degenerates.
double extrapolate_limit(const std::vector<std::pair<int, double>>& rows);

} // namespace stieltjes
