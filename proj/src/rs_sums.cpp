#include "stieltjes/rs_sums.hpp"

#include <algorithm>
#include <cmath>

#include "stieltjes/quadrature.hpp"

namespace stieltjes {

namespace {

void require_on_domain(const FunctionPair& fp, const Partition& partition) {
    if (partition.front() != fp.domain().a || partition.back() != fp.domain().b)
        throw validation_error("partition endpoints must match the pair's domain");
}

std::vector<double> breakpoints_in(const FunctionPair& fp, double lo, double hi) {
    std::vector<double> out;
    for (double p : fp.quadrature_breakpoints())
        if (p > lo && p < hi) out.push_back(p);
    return out;
}

} // namespace

TagChoice::TagChoice(std::vector<double> tags, const Partition& partition)
    : tags_(std::move(tags)) {
    if (static_cast<int>(tags_.size()) != partition.intervals())
        throw validation_error("tag count must equal the interval count");
    for (std::size_t i = 0; i < tags_.size(); ++i) {
        if (!(tags_[i] >= partition.points()[i] && tags_[i] <= partition.points()[i + 1]))
            throw validation_error("tag " + std::to_string(i) + " is outside its subinterval");
    }
}

double rs_sum(const FunctionPair& fp, const Partition& partition, const TagChoice& tags) {
    require_on_domain(fp, partition);
    const auto& pts = partition.points();
    double sum = 0.0;
    double g_left = fp.g()(pts[0]);
    for (int i = 0; i < partition.intervals(); ++i) {
        const double g_right = fp.g()(pts[i + 1]);
        sum += fp.f()(tags.tags()[i]) * (g_right - g_left);
        g_left = g_right;
    }
    return sum;
}

LowerSum lower_rs_sum(const FunctionPair& fp, const Partition& partition) {
    require_on_domain(fp, partition);
    const auto& pts = partition.points();
    std::vector<double> tags(partition.intervals());
    double sum = 0.0;
    double g_left = fp.g()(pts[0]);
    for (int i = 0; i < partition.intervals(); ++i) {
        const double g_right = fp.g()(pts[i + 1]);
        const MinResult m = min_on(fp, partition.subinterval(i));
        tags[i] = m.argmin;
        sum += m.value * (g_right - g_left);
        g_left = g_right;
    }
    return LowerSum{sum, std::move(tags)};
}

double reference_integral_on(const FunctionPair& fp, double lo, double hi, double abs_tol) {
    QuadratureOptions opts;
    opts.abs_tol = abs_tol;
    opts.rel_tol = 1e-12;
    opts.breakpoints = breakpoints_in(fp, lo, hi);
    const Expression& f = fp.f();
    const Expression& gp = fp.g_prime();
    return integrate([&](double t) { return f(t) * gp(t); }, lo, hi, opts);
}

double reference_integral(const FunctionPair& fp) {
    return reference_integral_on(fp, fp.domain().a, fp.domain().b, 1e-12);
}

GapReport gap(const FunctionPair& fp, const Partition& partition) {
    require_on_domain(fp, partition);
    const auto& pts = partition.points();
    const int n = partition.intervals();

    // Spread the absolute budget over subintervals by length so the
    // per-interval pieces sum to the total within ~1e-12 (1 + |I|).
    const double total_len = fp.domain().length();

    GapReport report;
    report.per_interval.resize(n);
    double integral = 0.0;
    double lower = 0.0;
    double g_left = fp.g()(pts[0]);
    for (int i = 0; i < n; ++i) {
        const double g_right = fp.g()(pts[i + 1]);
        const double len = pts[i + 1] - pts[i];
        const double piece =
            reference_integral_on(fp, pts[i], pts[i + 1], 1e-12 * std::max(len / total_len, 1e-3));
        const MinResult m = min_on(fp, partition.subinterval(i));
        const double contribution = m.value * (g_right - g_left);
        report.per_interval[i] = piece - contribution;
        integral += piece;
        lower += contribution;
        g_left = g_right;
    }
    report.integral = integral;
    report.lower_sum = lower;
    report.gap = integral - lower;
    return report;
}

BoundCheck check_gap_bound(const FunctionPair& fp, const Interval& sub) {
    const double piece = reference_integral_on(fp, sub.a, sub.b);
    const double dg = fp.g()(sub.b) - fp.g()(sub.a);
    const double lhs = piece - dg * min_on(fp, sub).value;
    const double rhs = 0.5 * sub.length() * sub.length() * sup_norm(fp.f_prime(), sub) *
                       sup_norm(fp.g_prime(), sub);
    return BoundCheck{lhs, rhs, lhs <= rhs + 1e-10};
}

BoundCheck check_local_expansion(const FunctionPair& fp, const Interval& sub, double xi) {
    if (!fp.domain().contains(sub))
        throw validation_error("subinterval is outside the pair's domain");
    if (!(xi >= sub.a && xi <= sub.b))
        throw validation_error("xi must lie in the subinterval");

    // f' must keep one sign on sub: no critical zero strictly inside and
    // the same sign at both endpoints.
    const auto& zeros = fp.critical().zeros;
    for (double z : zeros)
        if (z > sub.a && z < sub.b)
            throw validation_error("f' has a zero inside the subinterval; f is not monotone there");
    const double fa = fp.f_prime()(sub.a);
    const double fb = fp.f_prime()(sub.b);
    if (fa == 0.0 || fb == 0.0 || (fa < 0.0) != (fb < 0.0))
        throw validation_error("f' must keep one sign on the subinterval");

    const double len = sub.length();
    const double piece = reference_integral_on(fp, sub.a, sub.b);
    const double dg = fp.g()(sub.b) - fp.g()(sub.a);
    const double local_gap = piece - dg * min_on(fp, sub).value;

    const double principal = 0.5 * len * len * std::fabs(fp.f_prime()(xi)) * fp.g_prime()(xi);
    const double lhs = std::fabs(local_gap - principal);

    const Interval& dom = fp.domain();
    const double rhs = 0.5 * len * len *
                       (sup_norm(fp.g_prime(), dom) * modulus_of_continuity(fp.f_prime(), dom, len) +
                        sup_norm(fp.f_prime(), dom) * modulus_of_continuity(fp.g_prime(), dom, len));
    return BoundCheck{lhs, rhs, lhs <= rhs + 1e-9};
}

bool refinement_check(const FunctionPair& fp, const Partition& coarse, const Partition& fine) {
    if (!coarse.refined_by(fine))
        throw validation_error("second partition does not refine the first");
    const double coarse_sum = lower_rs_sum(fp, coarse).value;
    const double fine_sum = lower_rs_sum(fp, fine).value;
    const double scale = 1.0 + std::fabs(reference_integral(fp));
    return fine_sum >= coarse_sum - 1e-12 * scale;
}

} // namespace stieltjes
