#pragma once

#include <functional>
#include <vector>

#include "stieltjes/errors.hpp"

namespace stieltjes {

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    /// Interior points where the integrand loses smoothness; the
    /// integration range is split there before adapting.
    std::vector<double> breakpoints{};
    int max_intervals = 20000;
};

/// Globally adaptive Gauss-Kronrod 7-15 integration of f over [a, b].
/// Kronrod nodes are interior, so f is never evaluated at interval
/// endpoints (integrable endpoint kinks are fine). Throws
/// convergence_error when the interval budget is exhausted before the
/// error estimate meets max(abs_tol, rel_tol*|result|).
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts = {});

} // namespace stieltjes
