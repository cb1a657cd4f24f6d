#include "stieltjes/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "stieltjes/rs_sums.hpp"

namespace stieltjes {

bool CheckReport::all_passed() const {
    for (const SuiteResult& s : suites)
        if (s.failed > 0) return false;
    return true;
}

int CheckReport::total_failed() const {
    int total = 0;
    for (const SuiteResult& s : suites) total += s.failed;
    return total;
}

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Interval random_subinterval(Rng& rng, const Interval& dom, double min_width_frac = 1e-3) {
    for (;;) {
        double x = uniform(rng, dom.a, dom.b);
        double y = uniform(rng, dom.a, dom.b);
        if (x > y) std::swap(x, y);
        if (y - x >= min_width_frac * dom.length()) return Interval(x, y);
    }
}

Partition random_partition(Rng& rng, const Interval& dom, int max_interior) {
    const int k = std::uniform_int_distribution<int>(0, max_interior)(rng);
    for (;;) {
        std::vector<double> pts{dom.a, dom.b};
        for (int i = 0; i < k; ++i) pts.push_back(uniform(rng, dom.a, dom.b));
        std::sort(pts.begin(), pts.end());
        bool ok = true;
        for (std::size_t i = 1; i < pts.size(); ++i)
            if (pts[i] - pts[i - 1] < 1e-4 * dom.length()) ok = false;
        if (ok) return Partition(std::move(pts));
    }
}

std::string describe(const Interval& sub, double lhs, double rhs) {
    std::ostringstream os;
    os.precision(17);
    os << "sub=[" << sub.a << ", " << sub.b << "] lhs=" << lhs << " rhs=" << rhs;
    return os.str();
}

// Segments of the domain where f' keeps one sign, with a safety margin
// away from the critical zeros and the domain boundary.
std::vector<Interval> sign_definite_segments(const FunctionPair& fp) {
    std::vector<double> bounds{fp.domain().a};
    for (double z : fp.critical().zeros)
        if (z > fp.domain().a && z < fp.domain().b) bounds.push_back(z);
    bounds.push_back(fp.domain().b);

    std::vector<Interval> segments;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        const double len = bounds[i + 1] - bounds[i];
        const double margin = std::max(1e-6 * fp.domain().length(), 1e-3 * len);
        const double lo = bounds[i] + margin;
        const double hi = bounds[i + 1] - margin;
        if (hi - lo < 1e-6 * fp.domain().length()) continue;
        // require a definite sign at both segment ends
        try {
            const double fa = fp.f_prime()(lo);
            const double fb = fp.f_prime()(hi);
            if (fa == 0.0 || fb == 0.0 || (fa < 0.0) != (fb < 0.0)) continue;
        } catch (const eval_error&) {
            continue;
        }
        segments.emplace_back(lo, hi);
    }
    return segments;
}

} // namespace

CheckReport run_invariant_suites(const FunctionPair& fp, std::uint64_t seed, int cases) {
    if (cases < 1) throw validation_error("cases must be >= 1");
    CheckReport report;
    const double integral = reference_integral(fp);
    const double scale = 1.0 + std::fabs(integral);

    {
        SuiteResult suite{"gap-bound", 0, 0, ""};
        Rng rng(seed * 6364136223846793005ULL + 1);
        for (int c = 0; c < cases; ++c) {
            const Interval sub = random_subinterval(rng, fp.domain());
            const BoundCheck r = check_gap_bound(fp, sub);
            if (r.holds)
                ++suite.passed;
            else if (++suite.failed == 1)
                suite.detail = describe(sub, r.lhs, r.rhs);
        }
        report.suites.push_back(std::move(suite));
    }

    {
        SuiteResult suite{"local-expansion", 0, 0, ""};
        Rng rng(seed * 6364136223846793005ULL + 2);
        const auto segments = sign_definite_segments(fp);
        if (segments.empty()) {
            suite.detail = "skipped: f' has no sign-definite subintervals";
        } else {
            for (int c = 0; c < cases; ++c) {
                const Interval& seg =
                    segments[std::uniform_int_distribution<std::size_t>(0, segments.size() - 1)(rng)];
                const Interval sub = random_subinterval(rng, seg);
                const double xi = uniform(rng, sub.a, sub.b);
                const BoundCheck r = check_local_expansion(fp, sub, xi);
                if (r.holds)
                    ++suite.passed;
                else if (++suite.failed == 1)
                    suite.detail = describe(sub, r.lhs, r.rhs);
            }
        }
        report.suites.push_back(std::move(suite));
    }

    {
        SuiteResult suite{"refinement-monotone", 0, 0, ""};
        Rng rng(seed * 6364136223846793005ULL + 3);
        for (int c = 0; c < cases; ++c) {
            const Partition coarse = random_partition(rng, fp.domain(), 10);
            std::vector<double> pts = coarse.points();
            const int extra = std::uniform_int_distribution<int>(1, 8)(rng);
            for (int e = 0; e < extra; ++e) pts.push_back(uniform(rng, fp.domain().a, fp.domain().b));
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
            bool spaced = true;
            for (std::size_t i = 1; i < pts.size(); ++i)
                if (pts[i] - pts[i - 1] <= 0.0) spaced = false;
            if (!spaced) {
                --c;
                continue;
            }
            const Partition fine{std::move(pts)};
            if (refinement_check(fp, coarse, fine)) {
                ++suite.passed;
            } else if (++suite.failed == 1) {
                std::ostringstream os;
                os.precision(17);
                os << "coarse sum " << lower_rs_sum(fp, coarse).value << " > refined sum "
                   << lower_rs_sum(fp, fine).value;
                suite.detail = os.str();
            }
        }
        report.suites.push_back(std::move(suite));
    }

    {
        SuiteResult suite{"lower-sum-minimal", 0, 0, ""};
        Rng rng(seed * 6364136223846793005ULL + 4);
        for (int c = 0; c < cases; ++c) {
            const Partition partition = random_partition(rng, fp.domain(), 12);
            std::vector<double> tags(partition.intervals());
            for (int i = 0; i < partition.intervals(); ++i)
                tags[i] = uniform(rng, partition.points()[i], partition.points()[i + 1]);
            const TagChoice choice(std::move(tags), partition);
            const double tagged = rs_sum(fp, partition, choice);
            const double lower = lower_rs_sum(fp, partition).value;
            if (lower <= tagged + 1e-12 * scale) {
                ++suite.passed;
            } else if (++suite.failed == 1) {
                std::ostringstream os;
                os.precision(17);
                os << "lower sum " << lower << " exceeds tagged sum " << tagged;
                suite.detail = os.str();
            }
        }
        report.suites.push_back(std::move(suite));
    }

    {
        SuiteResult suite{"gap-additivity", 0, 0, ""};
        Rng rng(seed * 6364136223846793005ULL + 5);
        for (int c = 0; c < cases; ++c) {
            const Partition partition = random_partition(rng, fp.domain(), 12);
            const GapReport r = gap(fp, partition);
            double sum = 0.0;
            double worst = 0.0;
            for (double piece : r.per_interval) {
                sum += piece;
                worst = std::min(worst, piece);
            }
            const bool nonneg = r.gap >= -1e-12 * scale && worst >= -1e-12 * scale;
            const bool additive = std::fabs(r.gap - sum) <= 1e-10 * (1.0 + std::fabs(r.gap));
            if (nonneg && additive) {
                ++suite.passed;
            } else if (++suite.failed == 1) {
                std::ostringstream os;
                os.precision(17);
                os << "gap=" << r.gap << " sum_of_pieces=" << sum << " min_piece=" << worst;
                suite.detail = os.str();
            }
        }
        report.suites.push_back(std::move(suite));
    }

    return report;
}

} // namespace stieltjes
