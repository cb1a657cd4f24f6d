#pragma once

#include <cmath>
#include <functional>

namespace stieltjes {

struct GoldenResult {
    double x;
    double value;
};

/// Golden-section maximization of f over [lo, hi] down to an interval of
/// width tol. f is only compared, never differentiated, so kinks at the
/// maximizer are fine. Returns the better of the final bracket midpoint
/// and both endpoints.
template <typename F>
GoldenResult golden_max(F&& f, double lo, double hi, double tol) {
    static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    GoldenResult best{0.5 * (a + b), f(0.5 * (a + b))};
    const double flo = f(lo), fhi = f(hi);
    if (flo >= best.value) best = {lo, flo};       // ties prefer smaller t
    if (fhi > best.value) best = {hi, fhi};
    return best;
}

} // namespace stieltjes
