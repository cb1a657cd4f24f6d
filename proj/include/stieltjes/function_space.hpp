#pragma once

#include <optional>
#include <vector>

#include "stieltjes/expr.hpp"

namespace stieltjes {

struct Interval {
    double a;
    double b;

    Interval(double a_, double b_);
    double length() const { return b - a; }
    bool contains(double t) const { return t >= a && t <= b; }
    bool contains(const Interval& s) const { return s.a >= a && s.b <= b; }
};

/// Strictly increasing breakpoints t_0 < ... < t_n, n >= 1.
class Partition {
public:
    explicit Partition(std::vector<double> points);
    static Partition uniform(const Interval& iv, int n);

    const std::vector<double>& points() const { return points_; }
    double front() const { return points_.front(); }
    double back() const { return points_.back(); }
    int intervals() const { return static_cast<int>(points_.size()) - 1; }
    Interval subinterval(int i) const { return Interval(points_[i], points_[i + 1]); }
    double mesh() const;

    /// True when `fine` contains every breakpoint of this partition.
    bool refined_by(const Partition& fine) const;

private:
    std::vector<double> points_;
};

/// Zeros of f' inside the domain, found by sign-change bracketing on the
/// dense scan grid (plus near-zero touch minima of |f'|) and polished by
/// bisection to 1e-13 relative width.
struct CriticalSet {
    std::vector<double> zeros;
    double tolerance = 0.0;
};

struct MinResult {
    double argmin;
    double value;
};

/// Validated bundle (f, f', g, g') on an interval with g' > 0.
///
/// Construction differentiates symbolically and spot-checks the contract
/// on a dense grid (`kGridPerUnit` points per unit length, at least
/// `kGridMin` per interval): g' must evaluate and be strictly positive,
/// f and f' must evaluate, and f' must show only finitely many zeros.
class FunctionPair {
public:
    static constexpr int kGridPerUnit = 4096;
    static constexpr int kGridMin = 4096;

    FunctionPair(Expression f, Expression g, Interval domain);

    const Expression& f() const { return f_; }
    const Expression& f_prime() const { return f_prime_; }
    const Expression& g() const { return g_; }
    const Expression& g_prime() const { return g_prime_; }
    const Interval& domain() const { return domain_; }
    const CriticalSet& critical() const { return critical_; }

    /// Interior points where integrands built from the pair can lose
    /// smoothness: zeros of f' plus zeros of every abs/sqrt argument in
    /// f, f', g, g'. Quadratures over the pair pre-split here.
    const std::vector<double>& quadrature_breakpoints() const { return breakpoints_; }

    /// Value of f at the i-th critical zero (cached at construction).
    double f_at_zero(int i) const { return f_at_zeros_[i]; }

private:
    Expression f_, f_prime_, g_, g_prime_;
    Interval domain_;
    CriticalSet critical_;
    std::vector<double> f_at_zeros_;
    std::vector<double> breakpoints_;
};

/// Global minimum of f over sub (endpoints and polished critical zeros
/// are the candidates; ties break toward smaller t).
MinResult min_on(const FunctionPair& fp, const Interval& sub);

/// Global maximum of an arbitrary continuous expression over sub.
/// Interior candidates come from local maxima of a dense value scan,
/// refined by golden-section search.
double max_on(const Expression& w, const Interval& sub);

/// max |w| over iv.
double sup_norm(const Expression& w, const Interval& iv);

/// Upper estimate of the modulus of continuity
///   omega(w, delta) = sup { |w(x) - w(y)| : |x - y| <= delta }
/// by a sliding-window scan: anchors x cover [a, b - delta], each window
/// [x, x + delta] is ranged with exact endpoint evaluations plus cached
/// interior extremum candidates, and the scan maximum is inflated by the
/// largest adjacent-anchor variation (the grid-resolution correction).
double modulus_of_continuity(const Expression& w, const Interval& iv, double delta);

/// All critical zeros of f' (the set the lower-sum minimizers come from).
CriticalSet critical_set(const FunctionPair& fp);

/// Shared helper: zeros of `e` on `iv` located by sign changes on a grid
/// of `grid_points` samples, polished by bisection; near-zero touch
/// minima (|e| dipping below `touch_tol` without a sign change) are
/// included. Sample points where `e` fails to evaluate are skipped.
std::vector<double> expression_zeros(const Expression& e, const Interval& iv, int grid_points,
                                     double touch_tol);

/// Precomputed interior extremum candidates of one expression over one
/// interval, for repeated max/min queries on subintervals.
class ExtremaCache {
public:
    ExtremaCache(Expression w, Interval iv);

    double max_on(double lo, double hi) const;
    double min_on(double lo, double hi) const;

    const Expression& expression() const { return w_; }
    const Interval& interval() const { return iv_; }

private:
    Expression w_;
    Interval iv_;
    std::vector<std::pair<double, double>> maxima_; // (t, w(t)) sorted by t
    std::vector<std::pair<double, double>> minima_;
};

} // namespace stieltjes
