#include "stieltjes/function_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "stieltjes/golden.hpp"

namespace stieltjes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::optional<double> try_eval(const Expression& e, double t) {
    try {
        return e(t);
    } catch (const eval_error&) {
        return std::nullopt;
    }
}

int dense_grid_steps(double length) {
    const double want = static_cast<double>(FunctionPair::kGridPerUnit) * length;
    const double steps = std::max(static_cast<double>(FunctionPair::kGridMin), std::ceil(want));
    return static_cast<int>(std::min(steps, 1.0e7));
}

// Bisection on a sign change of e over [lo, hi] down to 1e-13 relative
// width. Midpoints where e fails to evaluate (e.g. an abs kink that is
// itself the root) are nudged; if the nudges fail too, the midpoint is
// the best available answer.
double bisect_sign_change(const Expression& e, double lo, double hi, double flo) {
    const bool lo_neg = flo < 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 1e-13 * (1.0 + std::fabs(mid))) return mid;
        std::optional<double> fm = try_eval(e, mid);
        if (!fm) {
            const double w = hi - lo;
            fm = try_eval(e, mid + 0.125 * w);
            if (fm && ((*fm < 0.0) == lo_neg)) {
                lo = mid + 0.125 * w;
                continue;
            }
            fm = try_eval(e, mid - 0.125 * w);
            if (fm && ((*fm < 0.0) != lo_neg)) {
                hi = mid - 0.125 * w;
                continue;
            }
            return mid;
        }
        if (*fm == 0.0) return mid;
        if ((*fm < 0.0) == lo_neg)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

void sort_dedupe(std::vector<double>& xs, double tol) {
    std::sort(xs.begin(), xs.end());
    std::vector<double> out;
    for (double x : xs) {
        if (out.empty() || x - out.back() > tol) out.push_back(x);
    }
    xs = std::move(out);
}

} // namespace

// ---------------------------------------------------------------------------
// Interval, Partition
// ---------------------------------------------------------------------------

Interval::Interval(double a_, double b_) : a(a_), b(b_) {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw validation_error("interval endpoints must be finite");
    if (!(a < b)) throw validation_error("interval requires a < b");
}

Partition::Partition(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw validation_error("partition needs at least two points");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i])) throw validation_error("partition points must be finite");
        if (i > 0 && !(points_[i - 1] < points_[i]))
            throw validation_error("partition points must be strictly increasing");
    }
}

Partition Partition::uniform(const Interval& iv, int n) {
    if (n < 1) throw validation_error("partition needs n >= 1 intervals");
    std::vector<double> pts(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) pts[i] = iv.a + (iv.b - iv.a) * (static_cast<double>(i) / n);
    pts.front() = iv.a;
    pts.back() = iv.b;
    return Partition(std::move(pts));
}

double Partition::mesh() const {
    double m = 0.0;
    for (std::size_t i = 1; i < points_.size(); ++i) m = std::max(m, points_[i] - points_[i - 1]);
    return m;
}

bool Partition::refined_by(const Partition& fine) const {
    std::size_t j = 0;
    for (double p : points_) {
        while (j < fine.points_.size() && fine.points_[j] < p) ++j;
        if (j == fine.points_.size() || fine.points_[j] != p) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Zero finding
// ---------------------------------------------------------------------------

std::vector<double> expression_zeros(const Expression& e, const Interval& iv, int grid_points,
                                     double touch_tol) {
    const int n = std::max(grid_points, 16);
    const double h = iv.length() / n;

    std::vector<double> xs(static_cast<std::size_t>(n) + 1);
    std::vector<double> vs(static_cast<std::size_t>(n) + 1);
    std::vector<char> ok(static_cast<std::size_t>(n) + 1);
    double vmax = 0.0;
    for (int i = 0; i <= n; ++i) {
        xs[i] = (i == n) ? iv.b : iv.a + i * h;
        auto v = try_eval(e, xs[i]);
        ok[i] = v.has_value();
        vs[i] = v.value_or(0.0);
        if (ok[i]) vmax = std::max(vmax, std::fabs(vs[i]));
    }

    std::vector<double> zeros;

    // Sign-change brackets between valid samples (possibly skipping one
    // invalid sample in between, e.g. an abs kink of e sitting on-grid).
    int prev = -1;
    for (int i = 0; i <= n; ++i) {
        if (!ok[i]) continue;
        if (vs[i] == 0.0) {
            const bool left_zero = i > 0 && ok[i - 1] && vs[i - 1] == 0.0;
            const bool right_zero = i < n && ok[i + 1] && vs[i + 1] == 0.0;
            // record isolated exact zeros and the ends of zero runs; the
            // interior of a run (f' vanishing on a whole stretch, e.g. a
            // constant f) is left out so the count stays finite
            if (!left_zero || !right_zero) zeros.push_back(xs[i]);
            prev = i;
            continue;
        }
        if (prev >= 0 && vs[prev] != 0.0 && i - prev <= 2 &&
            (vs[prev] < 0.0) != (vs[i] < 0.0)) {
            zeros.push_back(bisect_sign_change(e, xs[prev], xs[i], vs[prev]));
        }
        prev = i;
    }

    // Touch zeros: |e| dips below the threshold at a local minimum without
    // changing sign (e.g. the derivative of t^3 at 0).
    const double thresh = touch_tol * (1.0 + vmax);
    for (int i = 1; i < n; ++i) {
        if (!(ok[i - 1] && ok[i] && ok[i + 1])) continue;
        const double ai = std::fabs(vs[i]);
        if (ai == 0.0 || ai >= thresh) continue;
        if (ai > std::fabs(vs[i - 1]) || ai > std::fabs(vs[i + 1])) continue;
        if ((vs[i - 1] < 0.0) != (vs[i + 1] < 0.0)) continue; // sign change already handled
        auto depth = [&](double t) {
            auto v = try_eval(e, t);
            return v ? -std::fabs(*v) : -kInf;
        };
        GoldenResult r = golden_max(depth, xs[i - 1], xs[i + 1], 1e-13 * (1.0 + std::fabs(xs[i])));
        if (-r.value <= 1e-3 * thresh) zeros.push_back(r.x);
    }

    sort_dedupe(zeros, 1e-11 * (1.0 + std::max(std::fabs(iv.a), std::fabs(iv.b))));
    return zeros;
}

// ---------------------------------------------------------------------------
// ExtremaCache
// ---------------------------------------------------------------------------

ExtremaCache::ExtremaCache(Expression w, Interval iv) : w_(std::move(w)), iv_(iv) {
    const int n = dense_grid_steps(iv_.length());
    const double h = iv_.length() / n;

    std::vector<double> xs(static_cast<std::size_t>(n) + 1);
    std::vector<double> vs(static_cast<std::size_t>(n) + 1);
    std::vector<char> ok(static_cast<std::size_t>(n) + 1);
    int valid = 0;
    for (int i = 0; i <= n; ++i) {
        xs[i] = (i == n) ? iv_.b : iv_.a + i * h;
        auto v = try_eval(w_, xs[i]);
        ok[i] = v.has_value();
        vs[i] = v.value_or(0.0);
        valid += ok[i];
    }
    if (valid == 0) throw eval_error("expression is not evaluable anywhere on the interval");

    auto refine = [&](int i, bool want_max) {
        auto score = [&](double t) {
            auto v = try_eval(w_, t);
            if (!v) return -kInf;
            return want_max ? *v : -*v;
        };
        GoldenResult r = golden_max(score, xs[i - 1], xs[i + 1], 1e-13 * (1.0 + std::fabs(xs[i])));
        if (r.value == -kInf) return;
        auto& dst = want_max ? maxima_ : minima_;
        dst.emplace_back(r.x, want_max ? r.value : -r.value);
    };

    for (int i = 1; i < n; ++i) {
        if (!(ok[i - 1] && ok[i] && ok[i + 1])) continue;
        const bool ge = vs[i] >= vs[i - 1] && vs[i] >= vs[i + 1];
        const bool gt = vs[i] > vs[i - 1] || vs[i] > vs[i + 1];
        if (ge && gt) refine(i, true);
        const bool le = vs[i] <= vs[i - 1] && vs[i] <= vs[i + 1];
        const bool lt = vs[i] < vs[i - 1] || vs[i] < vs[i + 1];
        if (le && lt) refine(i, false);
    }
    auto by_t = [](const auto& p, const auto& q) { return p.first < q.first; };
    std::sort(maxima_.begin(), maxima_.end(), by_t);
    std::sort(minima_.begin(), minima_.end(), by_t);
}

double ExtremaCache::max_on(double lo, double hi) const {
    const double slack = 1e-12 * (1.0 + iv_.length());
    if (lo < iv_.a - slack || hi > iv_.b + slack || !(lo <= hi))
        throw validation_error("query range outside the cached interval");

    bool found = false;
    double best = -kInf;
    auto consider = [&](double v) {
        if (!found || v > best) {
            best = v;
            found = true;
        }
    };
    if (auto v = try_eval(w_, lo)) consider(*v);
    // interior candidates in ascending t keep ties at the smaller t
    auto it = std::lower_bound(maxima_.begin(), maxima_.end(), lo,
                               [](const auto& p, double x) { return p.first < x; });
    for (; it != maxima_.end() && it->first <= hi; ++it) consider(it->second);
    if (auto v = try_eval(w_, hi)) consider(*v);
    if (!found) throw eval_error("expression is not evaluable on the query range");
    return best;
}

double ExtremaCache::min_on(double lo, double hi) const {
    const double slack = 1e-12 * (1.0 + iv_.length());
    if (lo < iv_.a - slack || hi > iv_.b + slack || !(lo <= hi))
        throw validation_error("query range outside the cached interval");

    bool found = false;
    double best = kInf;
    auto consider = [&](double v) {
        if (!found || v < best) {
            best = v;
            found = true;
        }
    };
    if (auto v = try_eval(w_, lo)) consider(*v);
    auto it = std::lower_bound(minima_.begin(), minima_.end(), lo,
                               [](const auto& p, double x) { return p.first < x; });
    for (; it != minima_.end() && it->first <= hi; ++it) consider(it->second);
    if (auto v = try_eval(w_, hi)) consider(*v);
    if (!found) throw eval_error("expression is not evaluable on the query range");
    return best;
}

// ---------------------------------------------------------------------------
// FunctionPair
// ---------------------------------------------------------------------------

FunctionPair::FunctionPair(Expression f, Expression g, Interval domain)
    : f_(std::move(f)),
      f_prime_(Expression::constant(0.0)),
      g_(std::move(g)),
      g_prime_(Expression::constant(0.0)),
      domain_(domain) {
    Derivative df = differentiate(f_);
    Derivative dg = differentiate(g_);
    f_prime_ = df.expr;
    g_prime_ = dg.expr;

    const int n = dense_grid_steps(domain_.length());
    const double h = domain_.length() / n;
    for (int i = 0; i <= n; ++i) {
        const double t = (i == n) ? domain_.b : domain_.a + i * h;
        auto gp = try_eval(g_prime_, t);
        if (!gp || !(*gp > 0.0))
            throw validation_error("g' must be strictly positive on the domain (failed near t = " +
                                   std::to_string(t) + ")");
        if (!try_eval(g_, t))
            throw validation_error("g must be evaluable on the domain (failed near t = " +
                                   std::to_string(t) + ")");
        if (!try_eval(f_, t))
            throw validation_error("f must be evaluable on the domain (failed near t = " +
                                   std::to_string(t) + ")");
        if (!try_eval(f_prime_, t))
            throw validation_error("f' must be evaluable on the domain (failed near t = " +
                                   std::to_string(t) + "); f must be C1");
    }

    critical_.zeros = expression_zeros(f_prime_, domain_, n, 1e-6);
    critical_.tolerance = 1e-11 * (1.0 + std::max(std::fabs(domain_.a), std::fabs(domain_.b)));
    if (critical_.zeros.size() > 2048)
        throw validation_error("f' must have finitely many zeros; the scan found " +
                               std::to_string(critical_.zeros.size()));

    f_at_zeros_.reserve(critical_.zeros.size());
    for (double z : critical_.zeros) f_at_zeros_.push_back(f_(z));

    std::vector<Expression> args;
    for (const Expression* e : {&f_, &f_prime_, &g_, &g_prime_}) {
        auto more = nonsmooth_arguments(*e);
        args.insert(args.end(), more.begin(), more.end());
    }
    for (const Expression& arg : args) {
        double c;
        if (arg.is_constant(&c)) continue;
        auto zs = expression_zeros(arg, domain_, n, 1e-6);
        breakpoints_.insert(breakpoints_.end(), zs.begin(), zs.end());
    }
    for (double z : critical_.zeros) breakpoints_.push_back(z);
    sort_dedupe(breakpoints_, critical_.tolerance);
    while (!breakpoints_.empty() && breakpoints_.front() <= domain_.a)
        breakpoints_.erase(breakpoints_.begin());
    while (!breakpoints_.empty() && breakpoints_.back() >= domain_.b) breakpoints_.pop_back();
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

MinResult min_on(const FunctionPair& fp, const Interval& sub) {
    const double slack = 1e-12 * (1.0 + fp.domain().length());
    if (sub.a < fp.domain().a - slack || sub.b > fp.domain().b + slack)
        throw validation_error("subinterval is outside the pair's domain");

    MinResult best{sub.a, fp.f()(sub.a)};
    const auto& zeros = fp.critical().zeros;
    auto it = std::lower_bound(zeros.begin(), zeros.end(), sub.a);
    for (std::size_t i = it - zeros.begin(); i < zeros.size() && zeros[i] <= sub.b; ++i) {
        const double v = fp.f_at_zero(static_cast<int>(i));
        if (v < best.value) best = {zeros[i], v};
    }
    const double vb = fp.f()(sub.b);
    if (vb < best.value) best = {sub.b, vb};
    return best;
}

double max_on(const Expression& w, const Interval& sub) {
    ExtremaCache cache(w, sub);
    return cache.max_on(sub.a, sub.b);
}

double sup_norm(const Expression& w, const Interval& iv) {
    return max_on(Expression::abs(w), iv);
}

double modulus_of_continuity(const Expression& w, const Interval& iv, double delta) {
    if (!(delta > 0.0) || delta > iv.length() * (1.0 + 1e-12))
        throw validation_error("modulus window must satisfy 0 < delta <= |interval|");
    delta = std::min(delta, iv.length());

    ExtremaCache cache(w, iv);
    const double span = iv.length() - delta;
    int anchors = dense_grid_steps(span);
    if (span <= 1e-15 * iv.length()) anchors = 0;

    // window oscillation as a function of the anchor
    auto phi = [&](double x) {
        const double hi = std::min(x + delta, iv.b);
        return cache.max_on(x, hi) - cache.min_on(x, hi);
    };

    std::vector<double> values(static_cast<std::size_t>(anchors) + 1);
    double best = 0.0;
    double max_jump = 0.0;
    for (int i = 0; i <= anchors; ++i) {
        const double x = (anchors == 0) ? iv.a : iv.a + span * (static_cast<double>(i) / anchors);
        values[i] = phi(x);
        best = std::max(best, values[i]);
        if (i > 0) max_jump = std::max(max_jump, std::fabs(values[i] - values[i - 1]));
    }

    // polish the highest anchors so the scan resolution drops out of the
    // estimate; the remaining inflation is the Lipschitz correction at
    // the refined bracket width
    const double step = anchors > 0 ? span / anchors : 0.0;
    const double refine_tol = 1e-12 * (1.0 + iv.length());
    if (anchors > 0) {
        std::vector<int> order(values.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int p, int q) {
            if (values[p] != values[q]) return values[p] > values[q];
            return p < q;
        });
        const int budget = std::min<int>(8, static_cast<int>(order.size()));
        for (int k = 0; k < budget; ++k) {
            const int i = order[k];
            const double x = iv.a + span * (static_cast<double>(i) / anchors);
            const double lo = std::max(iv.a, x - step);
            const double hi = std::min(iv.a + span, x + step);
            if (hi <= lo) continue;
            best = std::max(best, golden_max(phi, lo, hi, refine_tol).value);
        }
    }
    const double inflation = step > 0.0 ? max_jump * (refine_tol / step) : 0.0;
    return best + inflation;
}

CriticalSet critical_set(const FunctionPair& fp) { return fp.critical(); }

} // namespace stieltjes
