#pragma once

#include <vector>

#include "stieltjes/function_space.hpp"

namespace stieltjes {

/// One evaluation point per subinterval, xi_i in [t_{i-1}, t_i].
class TagChoice {
public:
    TagChoice(std::vector<double> tags, const Partition& partition);
    const std::vector<double>& tags() const { return tags_; }

private:
    std::vector<double> tags_;
};

struct LowerSum {
    double value;
    std::vector<double> tags; // per-subinterval argmins
};

struct GapReport {
    double integral;
    double lower_sum;
    double gap; // integral - lower_sum
    std::vector<double> per_interval;
};

struct BoundCheck {
    double lhs;
    double rhs;
    bool holds;
};

/// Sum of f(xi_i) [g(t_i) - g(t_{i-1})].
double rs_sum(const FunctionPair& fp, const Partition& partition, const TagChoice& tags);

/// The tagged sum with per-subinterval minimizers of f; since g is
/// increasing this is the smallest value over all tag choices.
LowerSum lower_rs_sum(const FunctionPair& fp, const Partition& partition);

/// The Riemann-Stieltjes integral of f against g, computed as the
/// integral of f g' (g is C1) by adaptive quadrature with forced
/// breakpoints at f' zeros and abs/sqrt kinks. abs_tol/rel_tol 1e-12.
double reference_integral(const FunctionPair& fp);

/// Integral of f g' restricted to [lo, hi], same breakpoints, with the
/// tolerance scaled to the subinterval so per-interval gaps add up to
/// the total without cancellation.
double reference_integral_on(const FunctionPair& fp, double lo, double hi, double abs_tol = 1e-13);

/// Integral minus lower sum, decomposed per subinterval. Each entry is
/// computed from a quadrature restricted to its own subinterval.
GapReport gap(const FunctionPair& fp, const Partition& partition);

/// Single-interval gap bound: gap(sub) <= 1/2 |sub|^2 ||f'|| ||g'||, the
/// norms over sub. holds allows 1e-10 slack.
BoundCheck check_gap_bound(const FunctionPair& fp, const Interval& sub);

/// Second-order local expansion on an interval where f' keeps one sign:
///   | gap(sub) - 1/2 (q-p)^2 |f'(xi)| g'(xi) |
///     <= 1/2 (q-p)^2 ( ||g'|| w(f', q-p) + ||f'|| w(g', q-p) )
/// with sup norms and moduli taken over the whole domain. Throws
/// validation_error when f' changes sign on sub or xi is outside.
BoundCheck check_local_expansion(const FunctionPair& fp, const Interval& sub, double xi);

/// Refining a partition cannot decrease the lower sum (up to
/// 1e-12 (1 + |I|) slack). `fine` must contain every point of `coarse`.
bool refinement_check(const FunctionPair& fp, const Partition& coarse, const Partition& fine);

} // namespace stieltjes
