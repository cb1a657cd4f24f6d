#include "stieltjes/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stieltjes/equalize.hpp"
#include "stieltjes/golden.hpp"
#include "stieltjes/parallel.hpp"
#include "stieltjes/quadrature.hpp"

namespace stieltjes {

namespace {

constexpr double kConstantDerivativeFloor = 1e-13;

bool derivative_vanishes(const FunctionPair& fp) {
    return sup_norm(fp.f_prime(), fp.domain()) <= kConstantDerivativeFloor;
}

// Lower-sum contribution of one subinterval [p, q].
double contribution(const FunctionPair& fp, double p, double q) {
    return min_on(fp, Interval(p, q)).value * (fp.g()(q) - fp.g()(p));
}

} // namespace

double asymptotic_constant(const FunctionPair& fp) {
    const Expression& fprime = fp.f_prime();
    const Expression& gprime = fp.g_prime();
    QuadratureOptions opts;
    opts.abs_tol = 1e-10;
    opts.rel_tol = 1e-10;
    for (double p : fp.quadrature_breakpoints())
        if (p > fp.domain().a && p < fp.domain().b) opts.breakpoints.push_back(p);
    const double integral = integrate(
        [&](double t) { return std::sqrt(std::fabs(fprime(t)) * gprime(t)); }, fp.domain().a,
        fp.domain().b, opts);
    return 0.5 * integral * integral;
}

Partition near_optimal_partition(const FunctionPair& fp, int n) {
    if (n < 1) throw validation_error("n must be >= 1");
    if (n == 1) return Partition({fp.domain().a, fp.domain().b});
    if (derivative_vanishes(fp)) return Partition::uniform(fp.domain(), n);
    const Expression w = Expression::sqrt(Expression::abs(fp.f_prime()));
    const Expression h = Expression::sqrt(fp.g_prime());
    return equalize(w, h, fp.domain(), n).partition;
}

OptimizeResult optimize(const FunctionPair& fp, int n) {
    if (n < 1) throw validation_error("n must be >= 1");
    const double integral = reference_integral(fp);
    const double stall_tol = 1e-13 * (1.0 + std::fabs(integral));

    Partition current = near_optimal_partition(fp, n);
    std::vector<double> pts = current.points();

    auto total = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += contribution(fp, pts[i], pts[i + 1]);
        return s;
    };

    int sweeps = 0;
    if (n > 1) {
        double prev = total();
        for (sweeps = 1; sweeps <= 200; ++sweeps) {
            for (int i = 1; i < n; ++i) {
                const double lo = pts[i - 1];
                const double hi = pts[i + 1];
                const double margin = 1e-12 * (hi - lo);
                auto objective = [&](double t) {
                    return contribution(fp, lo, t) + contribution(fp, t, hi);
                };
                // multistart: the two-interval objective need not be
                // unimodal, so seed golden-section from the best of five
                // probes plus the current position
                const double incumbent = objective(pts[i]);
                double seed = pts[i];
                double seed_val = incumbent;
                for (int k = 1; k <= 5; ++k) {
                    const double t = lo + (hi - lo) * (static_cast<double>(k) / 6.0);
                    const double v = objective(t);
                    if (v > seed_val) {
                        seed = t;
                        seed_val = v;
                    }
                }
                const double radius = (hi - lo) / 6.0;
                const double wlo = std::max(lo + margin, seed - radius);
                const double whi = std::min(hi - margin, seed + radius);
                GoldenResult best = golden_max(objective, wlo, whi, 1e-12 * (hi - lo));
                if (best.value < seed_val) best = {seed, seed_val};
                if (best.value > incumbent) pts[i] = best.x;
            }
            const double cur = total();
            if (cur - prev < stall_tol) break;
            prev = cur;
        }
        sweeps = std::min(sweeps, 200);
        current = Partition(pts);
    }

    GapReport report = gap(fp, current);
    return OptimizeResult{std::move(current), report.lower_sum, report.gap,
                          "equalized-init local search", sweeps};
}

OptimizeResult optimize_grid_dp(const FunctionPair& fp, int n, int grid) {
    if (n < 1 || n > 64) throw validation_error("dp oracle handles 1 <= n <= 64");
    if (grid > 2048) throw validation_error("dp oracle handles grid <= 2048");
    if (grid < n + 1) throw validation_error("grid must have at least n + 1 points");

    const Interval& dom = fp.domain();
    std::vector<double> xs(grid);
    for (int i = 0; i < grid; ++i)
        xs[i] = dom.a + dom.length() * (static_cast<double>(i) / (grid - 1));
    xs.front() = dom.a;
    xs.back() = dom.b;

    std::vector<double> gv(grid);
    std::vector<double> fv(grid);
    for (int i = 0; i < grid; ++i) {
        gv[i] = fp.g()(xs[i]);
        fv[i] = fp.f()(xs[i]);
    }

    // min of f over [xs[j], xs[i]]: endpoint values plus the critical
    // zeros of f' inside the window (there are only a handful).
    const auto& zeros = fp.critical().zeros;
    auto min_between = [&](int j, int i) {
        double m = std::min(fv[j], fv[i]);
        const auto first = std::lower_bound(zeros.begin(), zeros.end(), xs[j]);
        const auto last = std::upper_bound(zeros.begin(), zeros.end(), xs[i]);
        for (auto z = first; z != last; ++z)
            m = std::min(m, fp.f_at_zero(static_cast<int>(z - zeros.begin())));
        return m;
    };
    auto cell = [&](int j, int i) { return min_between(j, i) * (gv[i] - gv[j]); };

    const double neg_inf = -std::numeric_limits<double>::infinity();
    // best[k][i]: maximal lower sum splitting [xs[0], xs[i]] into k pieces
    std::vector<std::vector<double>> best(n + 1, std::vector<double>(grid, neg_inf));
    std::vector<std::vector<int>> from(n + 1, std::vector<int>(grid, -1));
    best[0][0] = 0.0;
    for (int k = 1; k <= n; ++k) {
        for (int i = k; i < grid; ++i) {
            // piece counts left to fill cap how early the previous cut sits
            const int jmax = i - 1;
            const int jmin = k - 1;
            double b = neg_inf;
            int arg = -1;
            for (int j = jmin; j <= jmax; ++j) {
                if (best[k - 1][j] == neg_inf) continue;
                const double v = best[k - 1][j] + cell(j, i);
                if (v > b) {
                    b = v;
                    arg = j;
                }
            }
            best[k][i] = b;
            from[k][i] = arg;
        }
    }

    std::vector<double> cut(n + 1);
    int i = grid - 1;
    for (int k = n; k >= 0; --k) {
        cut[k] = xs[i];
        if (k > 0) i = from[k][i];
    }

    Partition partition{std::move(cut)};
    GapReport report = gap(fp, partition);
    return OptimizeResult{std::move(partition), report.lower_sum, report.gap, "grid DP oracle", 0};
}

RateReport rate_study(const FunctionPair& fp, const std::vector<int>& n_list) {
    if (n_list.empty()) throw validation_error("n_list must not be empty");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 1) throw validation_error("every n must be >= 1");
        if (i > 0 && n_list[i] <= n_list[i - 1])
            throw validation_error("n_list must be strictly increasing");
    }

    RateReport report;
    report.rows.resize(n_list.size());

    if (derivative_vanishes(fp)) {
        // constant f: every partition is optimal and the gap is exactly 0
        for (std::size_t i = 0; i < n_list.size(); ++i)
            report.rows[i] = RateRow{n_list[i], 0.0, 0.0};
        report.constant = 0.0;
        report.extrapolated = 0.0;
        report.relative_error = 0.0;
        return report;
    }

    parallel_for(n_list.size(), [&](std::size_t i) {
        OptimizeResult r = optimize(fp, n_list[i]);
        report.rows[i] = RateRow{n_list[i], r.gap, n_list[i] * r.gap};
    });

    report.constant = asymptotic_constant(fp);

    // Aitken delta-squared on the last three scaled gaps.
    const std::size_t m = report.rows.size();
    double ext = report.rows.back().scaled_gap;
    if (m >= 3) {
        const double x0 = report.rows[m - 3].scaled_gap;
        const double x1 = report.rows[m - 2].scaled_gap;
        const double x2 = report.rows[m - 1].scaled_gap;
        const double denom = (x2 - x1) - (x1 - x0);
        if (denom != 0.0) ext = x2 - (x2 - x1) * (x2 - x1) / denom;
    } else if (m == 2) {
        std::vector<std::pair<int, double>> rows{{report.rows[0].n, report.rows[0].scaled_gap},
                                                 {report.rows[1].n, report.rows[1].scaled_gap}};
        ext = extrapolate_limit(rows);
    }
    report.extrapolated = ext;
    report.relative_error =
        report.constant != 0.0 ? std::fabs(ext - report.constant) / report.constant : 0.0;
    return report;
}

} // namespace stieltjes
