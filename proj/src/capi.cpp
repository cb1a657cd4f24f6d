#include "stieltjes.h"

#include <cstring>
#include <string>

#include "stieltjes/catalog.hpp"
#include "stieltjes/checks.hpp"
#include "stieltjes/equalize.hpp"
#include "stieltjes/optimize.hpp"
#include "stieltjes/rs_sums.hpp"

using namespace stieltjes;

struct stj_expr {
    Expression value;
};
struct stj_pair {
    FunctionPair value;
};
struct stj_equalize_result {
    EqualizeResult value;
};
struct stj_optimize_result {
    OptimizeResult value;
};
struct stj_rate_report {
    RateReport value;
};
struct stj_check_report {
    CheckReport value;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : ""; }

template <typename Fn>
stj_status guarded(Fn&& fn) {
    try {
        fn();
        return STJ_OK;
    } catch (const parse_error& e) {
        set_error(e.what());
        return STJ_ERR_PARSE;
    } catch (const validation_error& e) {
        set_error(e.what());
        return STJ_ERR_VALIDATION;
    } catch (const eval_error& e) {
        set_error(e.what());
        return STJ_ERR_DOMAIN;
    } catch (const convergence_error& e) {
        set_error(e.what());
        return STJ_ERR_CONVERGENCE;
    } catch (const std::exception& e) {
        set_error(e.what());
        return STJ_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return STJ_ERR_INTERNAL;
    }
}

stj_status invalid_arg(const char* what) {
    set_error(what);
    return STJ_ERR_INVALID_ARG;
}

} // namespace

extern "C" {

const char* stj_status_name(stj_status status) {
    switch (status) {
        case STJ_OK: return "ok";
        case STJ_ERR_PARSE: return "parse error";
        case STJ_ERR_VALIDATION: return "validation error";
        case STJ_ERR_DOMAIN: return "domain error";
        case STJ_ERR_CONVERGENCE: return "convergence error";
        case STJ_ERR_INVALID_ARG: return "invalid argument";
        case STJ_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* stj_last_error(void) { return g_last_error.c_str(); }

/* -- expressions -------------------------------------------------------- */

stj_status stj_expr_parse(const char* source, stj_expr** out) {
    if (!source || !out) return invalid_arg("source and out must be non-NULL");
    *out = nullptr;
    return guarded([&] { *out = new stj_expr{Expression::parse(source)}; });
}

stj_status stj_expr_eval(const stj_expr* e, double t, double* out) {
    if (!e || !out) return invalid_arg("expression and out must be non-NULL");
    return guarded([&] { *out = e->value(t); });
}

stj_status stj_expr_derivative(const stj_expr* e, stj_expr** out) {
    if (!e || !out) return invalid_arg("expression and out must be non-NULL");
    *out = nullptr;
    return guarded([&] { *out = new stj_expr{differentiate(e->value).expr}; });
}

stj_status stj_expr_to_string(const stj_expr* e, char* buffer, size_t size, size_t* needed) {
    if (!e) return invalid_arg("expression must be non-NULL");
    return guarded([&] {
        const std::string text = e->value.to_string();
        if (needed) *needed = text.size() + 1;
        if (buffer && size > 0) {
            const size_t n = std::min(size - 1, text.size());
            std::memcpy(buffer, text.data(), n);
            buffer[n] = '\0';
        }
    });
}

void stj_expr_free(stj_expr* e) { delete e; }

/* -- function pair ------------------------------------------------------ */

stj_status stj_pair_create(const char* f, const char* g, double a, double b, stj_pair** out) {
    if (!f || !g || !out) return invalid_arg("f, g and out must be non-NULL");
    *out = nullptr;
    return guarded([&] {
        *out = new stj_pair{FunctionPair(Expression::parse(f), Expression::parse(g), Interval(a, b))};
    });
}

void stj_pair_free(stj_pair* pair) { delete pair; }

stj_status stj_reference_integral(const stj_pair* pair, double* out) {
    if (!pair || !out) return invalid_arg("pair and out must be non-NULL");
    return guarded([&] { *out = reference_integral(pair->value); });
}

stj_status stj_asymptotic_constant(const stj_pair* pair, double* out) {
    if (!pair || !out) return invalid_arg("pair and out must be non-NULL");
    return guarded([&] { *out = asymptotic_constant(pair->value); });
}

/* -- equalize ------------------------------------------------------------ */

stj_status stj_equalize(const char* w, const char* h, double a, double b, int n,
                        stj_equalize_result** out) {
    if (!w || !h || !out) return invalid_arg("w, h and out must be non-NULL");
    *out = nullptr;
    return guarded([&] {
        *out = new stj_equalize_result{
            equalize(Expression::parse(w), Expression::parse(h), Interval(a, b), n)};
    });
}

stj_status stj_equalize_fixed_point(const char* w, const char* h, double a, double b, int n,
                                    int max_iter, stj_equalize_result** out) {
    if (!w || !h || !out) return invalid_arg("w, h and out must be non-NULL");
    *out = nullptr;
    return guarded([&] {
        *out = new stj_equalize_result{equalize_fixed_point(
            Expression::parse(w), Expression::parse(h), Interval(a, b), n, max_iter)};
    });
}

size_t stj_equalize_result_points(const stj_equalize_result* r) {
    return r ? r->value.partition.points().size() : 0;
}

double stj_equalize_result_point(const stj_equalize_result* r, size_t i) {
    if (!r || i >= r->value.partition.points().size()) return 0.0;
    return r->value.partition.points()[i];
}

double stj_equalize_result_value(const stj_equalize_result* r) { return r ? r->value.value : 0.0; }

double stj_equalize_result_residual(const stj_equalize_result* r) {
    return r ? r->value.residual : 0.0;
}

int stj_equalize_result_iterations(const stj_equalize_result* r) {
    return r ? r->value.iterations : 0;
}

int stj_equalize_result_converged(const stj_equalize_result* r) {
    return r && r->value.converged ? 1 : 0;
}

void stj_equalize_result_free(stj_equalize_result* r) { delete r; }

/* -- optimize ------------------------------------------------------------- */

stj_status stj_optimize(const stj_pair* pair, int n, stj_optimize_result** out) {
    if (!pair || !out) return invalid_arg("pair and out must be non-NULL");
    *out = nullptr;
    return guarded([&] { *out = new stj_optimize_result{optimize(pair->value, n)}; });
}

stj_status stj_optimize_grid_dp(const stj_pair* pair, int n, int grid, stj_optimize_result** out) {
    if (!pair || !out) return invalid_arg("pair and out must be non-NULL");
    *out = nullptr;
    return guarded([&] { *out = new stj_optimize_result{optimize_grid_dp(pair->value, n, grid)}; });
}

size_t stj_optimize_result_points(const stj_optimize_result* r) {
    return r ? r->value.partition.points().size() : 0;
}

double stj_optimize_result_point(const stj_optimize_result* r, size_t i) {
    if (!r || i >= r->value.partition.points().size()) return 0.0;
    return r->value.partition.points()[i];
}

double stj_optimize_result_lower_sum(const stj_optimize_result* r) {
    return r ? r->value.lower_sum : 0.0;
}

double stj_optimize_result_gap(const stj_optimize_result* r) { return r ? r->value.gap : 0.0; }

const char* stj_optimize_result_method(const stj_optimize_result* r) {
    return r ? r->value.method.c_str() : "";
}

int stj_optimize_result_iterations(const stj_optimize_result* r) {
    return r ? r->value.iterations : 0;
}

void stj_optimize_result_free(stj_optimize_result* r) { delete r; }

/* -- rate study ------------------------------------------------------------ */

stj_status stj_rate_study(const stj_pair* pair, const int* n_list, size_t count,
                          stj_rate_report** out) {
    if (!pair || !n_list || !out) return invalid_arg("pair, n_list and out must be non-NULL");
    if (count == 0) return invalid_arg("n_list must not be empty");
    *out = nullptr;
    return guarded([&] {
        std::vector<int> ns(n_list, n_list + count);
        *out = new stj_rate_report{rate_study(pair->value, ns)};
    });
}

size_t stj_rate_report_rows(const stj_rate_report* r) { return r ? r->value.rows.size() : 0; }

int stj_rate_report_n(const stj_rate_report* r, size_t row) {
    if (!r || row >= r->value.rows.size()) return 0;
    return r->value.rows[row].n;
}

double stj_rate_report_gap(const stj_rate_report* r, size_t row) {
    if (!r || row >= r->value.rows.size()) return 0.0;
    return r->value.rows[row].gap;
}

double stj_rate_report_scaled_gap(const stj_rate_report* r, size_t row) {
    if (!r || row >= r->value.rows.size()) return 0.0;
    return r->value.rows[row].scaled_gap;
}

double stj_rate_report_constant(const stj_rate_report* r) { return r ? r->value.constant : 0.0; }

double stj_rate_report_extrapolated(const stj_rate_report* r) {
    return r ? r->value.extrapolated : 0.0;
}

double stj_rate_report_relative_error(const stj_rate_report* r) {
    return r ? r->value.relative_error : 0.0;
}

void stj_rate_report_free(stj_rate_report* r) { delete r; }

/* -- checks ----------------------------------------------------------------- */

stj_status stj_run_checks(const stj_pair* pair, uint64_t seed, int cases,
                          stj_check_report** out) {
    if (!pair || !out) return invalid_arg("pair and out must be non-NULL");
    *out = nullptr;
    return guarded(
        [&] { *out = new stj_check_report{run_invariant_suites(pair->value, seed, cases)}; });
}

size_t stj_check_report_suites(const stj_check_report* r) {
    return r ? r->value.suites.size() : 0;
}

const char* stj_check_report_suite_name(const stj_check_report* r, size_t i) {
    if (!r || i >= r->value.suites.size()) return "";
    return r->value.suites[i].name.c_str();
}

int stj_check_report_passed(const stj_check_report* r, size_t i) {
    if (!r || i >= r->value.suites.size()) return 0;
    return r->value.suites[i].passed;
}

int stj_check_report_failed(const stj_check_report* r, size_t i) {
    if (!r || i >= r->value.suites.size()) return 0;
    return r->value.suites[i].failed;
}

const char* stj_check_report_detail(const stj_check_report* r, size_t i) {
    if (!r || i >= r->value.suites.size()) return "";
    return r->value.suites[i].detail.c_str();
}

void stj_check_report_free(stj_check_report* r) { delete r; }

/* -- presets ------------------------------------------------------------------ */

size_t stj_preset_count(void) { return catalog().size(); }

const char* stj_preset_name(size_t i) {
    const auto& entries = catalog();
    if (i >= entries.size()) return "";
    return entries[i].name.c_str();
}

stj_status stj_preset_lookup(const char* name, const char** f, const char** g, double* a,
                             double* b) {
    if (!name) return invalid_arg("name must be non-NULL");
    const auto& entries = catalog();
    for (const CatalogEntry& e : entries) {
        if (e.name == name) {
            if (f) *f = e.f.c_str();
            if (g) *g = e.g.c_str();
            if (a) *a = e.a;
            if (b) *b = e.b;
            return STJ_OK;
        }
    }
    set_error(("unknown preset '" + std::string(name) + "'").c_str());
    return STJ_ERR_VALIDATION;
}

} /* extern "C" */
