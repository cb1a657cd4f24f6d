#include "stieltjes/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace stieltjes {

namespace {

// Gauss-Kronrod 7-15 pair on [-1, 1] (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526, 0.949107912342758524526189684048,
    0.864864423359769072789712788641, 0.741531185599394439863864773281,
    0.586087235467691130294144838259, 0.405845151377397166906606412077,
    0.207784955007898467600689403773, 0.0,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Segment {
    double a, b;
    double value;
    double error;
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (a + b);

    double resk = 0.0; // Kronrod 15-point
    double resg = 0.0; // Gauss 7-point
    double resabs = 0.0;
    double fv[15];
    int nv = 0;

    for (int j = 0; j < 8; ++j) {
        if (kXgk[j] == 0.0) {
            const double fc = f(c);
            fv[nv++] = fc;
            resk += kWgk[j] * fc;
            resg += kWg[3] * fc;
            resabs += kWgk[j] * std::fabs(fc);
        } else {
            const double dx = h * kXgk[j];
            const double f1 = f(c - dx);
            const double f2 = f(c + dx);
            fv[nv++] = f1;
            fv[nv++] = f2;
            resk += kWgk[j] * (f1 + f2);
            resabs += kWgk[j] * (std::fabs(f1) + std::fabs(f2));
            if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
        }
    }

    // QUADPACK-style error estimate: sharpen |K - G| by the extra order of
    // the Kronrod rule, normalized by the mean-deviation integral.
    const double meank = 0.5 * resk;
    double resasc = 0.0;
    {
        int k = 0;
        for (int j = 0; j < 8; ++j) {
            if (kXgk[j] == 0.0) {
                resasc += kWgk[j] * std::fabs(fv[k++] - meank);
            } else {
                resasc += kWgk[j] * (std::fabs(fv[k] - meank) + std::fabs(fv[k + 1] - meank));
                k += 2;
            }
        }
    }
    resasc *= std::fabs(h);

    double err = std::fabs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double round_floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs * std::fabs(h);
    err = std::max(err, round_floor);

    return Segment{a, b, resk * h, err};
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts) {
    if (!(a < b)) {
        if (a == b) return 0.0;
        throw validation_error("integration range is reversed");
    }

    std::vector<double> cuts{a, b};
    for (double p : opts.breakpoints)
        if (p > a && p < b) cuts.push_back(p);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto worse = [](const Segment& x, const Segment& y) { return x.error < y.error; };
    std::priority_queue<Segment, std::vector<Segment>, decltype(worse)> heap(worse);

    double total = 0.0;
    double total_err = 0.0;
    int used = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Segment s = gk15(f, cuts[i], cuts[i + 1]);
        total += s.value;
        total_err += s.error;
        heap.push(s);
        ++used;
    }

    const double min_width = 16.0 * std::numeric_limits<double>::epsilon() * (b - a);
    while (total_err > std::max(opts.abs_tol, opts.rel_tol * std::fabs(total))) {
        if (used >= opts.max_intervals)
            throw convergence_error("quadrature did not reach tolerance within the interval budget");
        Segment worst = heap.top();
        if (worst.b - worst.a <= min_width)
            throw convergence_error("quadrature stalled at roundoff-limited intervals");
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Segment left = gk15(f, worst.a, mid);
        Segment right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++used;
    }
    return total;
}

} // namespace stieltjes
