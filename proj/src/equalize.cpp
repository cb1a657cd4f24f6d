#include "stieltjes/equalize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stieltjes/parallel.hpp"
#include "stieltjes/quadrature.hpp"

namespace stieltjes {

namespace {

// Grid spot-checks of the hypotheses: w nonnegative and not identically
// zero on any open subinterval (no window of width |iv|/64 with all
// samples below 1e-14), h strictly positive.
void validate_weights(const Expression& w, const Expression& h, const Interval& iv) {
    const int n = 4096;
    const double step = iv.length() / n;
    const int window = n / 64;
    int dead_run = 0;
    try {
        for (int i = 0; i <= n; ++i) {
            const double t = (i == n) ? iv.b : iv.a + i * step;
            const double wv = w(t);
            if (wv < -1e-12) throw validation_error("w must be nonnegative on the interval");
            dead_run = (std::fabs(wv) < 1e-14) ? dead_run + 1 : 0;
            if (dead_run > window)
                throw validation_error("w vanishes on an open subinterval; products cannot equalize");
            const double hv = h(t);
            if (!(hv > 0.0)) throw validation_error("h must be strictly positive on the interval");
        }
    } catch (const eval_error& e) {
        throw validation_error(std::string("weight evaluation failed: ") + e.what());
    }
}

double product_on(const ExtremaCache& wc, const ExtremaCache& hc, double lo, double hi) {
    return (hi - lo) * wc.max_on(lo, hi) * hc.max_on(lo, hi);
}

struct MarchOutcome {
    std::vector<double> points; // a, t_1, ..., t_n (t_n <= b, unforced)
    bool overshoot;             // some interval could not reach J before b
};

// Given J, place each t_i as the root of the strictly increasing map
// s -> (s - t_{i-1}) max w max h - J, by bisection to machine width.
MarchOutcome march(const ExtremaCache& wc, const ExtremaCache& hc, const Interval& iv, int n,
                   double target) {
    MarchOutcome out;
    out.points.assign(1, iv.a);
    out.overshoot = false;
    double left = iv.a;
    for (int i = 0; i < n; ++i) {
        if (product_on(wc, hc, left, iv.b) < target) {
            out.overshoot = true;
            out.points.push_back(iv.b);
            return out;
        }
        double lo = left, hi = iv.b;
        for (int it = 0;
             it < 64 && hi - lo > 2.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::fabs(hi));
             ++it) {
            const double mid = 0.5 * (lo + hi);
            if (product_on(wc, hc, left, mid) < target)
                lo = mid;
            else
                hi = mid;
        }
        left = 0.5 * (lo + hi);
        out.points.push_back(left);
    }
    return out;
}

EqualizeResult finish(const ExtremaCache& wc, const ExtremaCache& hc, std::vector<double> points,
                      int iterations, bool landed) {
    points.back() = hc.interval().b;
    Partition partition{std::move(points)};
    const auto& pts = partition.points();
    double jmin = std::numeric_limits<double>::infinity();
    double jmax = 0.0;
    double jsum = 0.0;
    for (int i = 0; i < partition.intervals(); ++i) {
        const double j = product_on(wc, hc, pts[i], pts[i + 1]);
        jmin = std::min(jmin, j);
        jmax = std::max(jmax, j);
        jsum += j;
    }
    const double value = jsum / partition.intervals();
    const double residual = value > 0.0 ? std::max(jmax - value, value - jmin) / value
                                        : std::numeric_limits<double>::infinity();
    return EqualizeResult{std::move(partition), value, residual, iterations,
                          landed && residual <= 1e-10};
}

} // namespace

EqualizeResult equalize(const Expression& w, const Expression& h, const Interval& iv, int n) {
    if (n < 1) throw validation_error("equalize needs n >= 1");
    validate_weights(w, h, iv);
    ExtremaCache wc(w, iv);
    ExtremaCache hc(h, iv);

    if (n == 1) return finish(wc, hc, {iv.a, iv.b}, 0, true);

    // J* lies between 0 and the proof's bound (b-a) sup w sup h; marching
    // with larger J moves every breakpoint right, so t_n(J) brackets b.
    double lo = 0.0;
    double hi = product_on(wc, hc, iv.a, iv.b);
    const double landing_tol = 1e-12 * iv.length();

    // run the bracket all the way down to machine width; stopping at the
    // landing tolerance early would leave an O(tol) kink in the last
    // product when t_n is pinned to b
    MarchOutcome best = march(wc, hc, iv, n, lo);
    int iterations = 0;
    for (; iterations < 200; ++iterations) {
        if (hi - lo <= std::numeric_limits<double>::epsilon() * hi) break;
        const double mid = 0.5 * (lo + hi);
        MarchOutcome m = march(wc, hc, iv, n, mid);
        if (m.overshoot) {
            hi = mid;
        } else {
            lo = mid;
            best = std::move(m);
        }
    }
    if (best.overshoot || std::fabs(best.points.back() - iv.b) > landing_tol)
        throw convergence_error("equalize could not land t_n on b within tolerance");

    EqualizeResult result = finish(wc, hc, std::move(best.points), iterations, true);
    if (!result.converged)
        throw convergence_error("equalized products did not level out (residual " +
                                std::to_string(result.residual) + ")");
    return result;
}

EqualizeResult equalize_fixed_point(const Expression& w, const Expression& h, const Interval& iv,
                                    int n, int max_iter) {
    if (n < 1) throw validation_error("equalize needs n >= 1");
    if (max_iter < 1) throw validation_error("max_iter must be positive");
    validate_weights(w, h, iv);
    ExtremaCache wc(w, iv);
    ExtremaCache hc(h, iv);

    if (n == 1) return finish(wc, hc, {iv.a, iv.b}, 0, true);

    std::vector<double> lengths(n, 1.0 / n);
    std::vector<double> products(n);
    std::vector<double> best_points;
    double best_residual = std::numeric_limits<double>::infinity();

    for (int it = 0; it < max_iter; ++it) {
        std::vector<double> pts(n + 1);
        pts[0] = iv.a;
        double acc = 0.0;
        for (int i = 0; i + 1 < n; ++i) {
            acc += lengths[i];
            pts[i + 1] = iv.a + iv.length() * acc;
        }
        pts[n] = iv.b;

        double jsum = 0.0;
        double jmin = std::numeric_limits<double>::infinity();
        double jmax = 0.0;
        for (int i = 0; i < n; ++i) {
            products[i] = product_on(wc, hc, pts[i], pts[i + 1]);
            jsum += products[i];
            jmin = std::min(jmin, products[i]);
            jmax = std::max(jmax, products[i]);
        }
        const double jbar = jsum / n;
        const double residual = std::max(jmax - jbar, jbar - jmin) / jbar;
        if (residual < best_residual) {
            best_residual = residual;
            best_points = pts;
        }
        if (residual <= 1e-10) return finish(wc, hc, std::move(pts), it + 1, true);

        // u_i <- u_i (1/n) / psi_i(u), then renormalize; psi_i is the
        // normalized product share, so intervals whose product runs high
        // shrink on the next pass.
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            const double share = products[i] / jsum;
            lengths[i] *= (1.0 / n) / share;
            total += lengths[i];
        }
        for (int i = 0; i < n; ++i) lengths[i] /= total;
    }
    return finish(wc, hc, std::move(best_points), max_iter, false);
}

LimitStudy limit_study(const Expression& w, const Expression& h, const Interval& iv,
                       const std::vector<int>& n_list) {
    if (n_list.empty()) throw validation_error("n_list must not be empty");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 1) throw validation_error("every n must be >= 1");
        if (i > 0 && n_list[i] <= n_list[i - 1])
            throw validation_error("n_list must be strictly increasing");
    }

    LimitStudy study;
    study.rows.resize(n_list.size());
    parallel_for(n_list.size(), [&](std::size_t i) {
        EqualizeResult r = equalize(w, h, iv, n_list[i]);
        study.rows[i] = LimitRow{n_list[i], n_list[i] * r.value};
    });

    QuadratureOptions opts;
    opts.abs_tol = 1e-12;
    opts.rel_tol = 1e-12;
    for (const Expression* e : {&w, &h}) {
        for (const Expression& arg : nonsmooth_arguments(*e)) {
            double c;
            if (arg.is_constant(&c)) continue;
            auto zs = expression_zeros(arg, iv, std::max(4096, int(4096 * iv.length())), 1e-6);
            opts.breakpoints.insert(opts.breakpoints.end(), zs.begin(), zs.end());
        }
    }
    study.reference = integrate([&](double t) { return w(t) * h(t); }, iv.a, iv.b, opts);

    std::vector<std::pair<int, double>> rows;
    for (const LimitRow& r : study.rows) rows.emplace_back(r.n, r.scaled_value);
    study.extrapolated = extrapolate_limit(rows);
    return study;
}

double extrapolate_limit(const std::vector<std::pair<int, double>>& rows) {
    const std::size_t m = rows.size();
    if (m == 0) throw validation_error("cannot extrapolate an empty sequence");
    if (m == 1) return rows[0].second;

    auto eliminate = [](double n0, double x0, double n1, double x1) {
        // removes a c/n term: L = (n1 x1 - n0 x0) / (n1 - n0)
        return (n1 * x1 - n0 * x0) / (n1 - n0);
    };

    const auto& [n2, x2] = rows[m - 1];
    const auto& [n1, x1] = rows[m - 2];
    if (m == 2) return eliminate(n1, x1, n2, x2);

    const auto& [n0, x0] = rows[m - 3];
    const double r0 = eliminate(n0, x0, n1, x1);
    const double r1 = eliminate(n1, x1, n2, x2);
    // after the first elimination the residual behaves like 1/(n_i n_{i+1})
    const double m0 = static_cast<double>(n0) * n1;
    const double m1 = static_cast<double>(n1) * n2;
    if (m1 == m0) return r1;
    return (m1 * r1 - m0 * r0) / (m1 - m0);
}

} // namespace stieltjes
