// Command-line front end for the stieltjes shared library.
//
// Subcommands: equalize, optimize, rate, constant, check. Tabular output
// is RFC-4180-style CSV with every floating-point value printed to 17
// significant digits, so identical configurations reproduce identical
// bytes. Exit codes: 0 success, 1 failed inequality check, 2 validation
// or parse error, 3 convergence error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stieltjes.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitConvergence = 3;

int exit_code_for(stj_status status) {
    switch (status) {
        case STJ_OK: return kExitOk;
        case STJ_ERR_CONVERGENCE: return kExitConvergence;
        default: return kExitValidation;
    }
}

[[noreturn]] void fail(stj_status status) {
    std::cerr << "error: " << stj_last_error() << " (" << stj_status_name(status) << ")\n";
    std::exit(exit_code_for(status));
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Output sink: --out PATH, with "-" (the default) meaning stdout.
class Output {
public:
    explicit Output(const std::string& path) {
        if (path == "-" || path.empty()) return;
        file_.open(path, std::ios::binary);
        if (!file_) {
            std::cerr << "error: cannot open output file '" << path << "'\n";
            std::exit(kExitValidation);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::vector<int> parse_n_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t pos = 0;
            const int v = std::stoi(item, &pos);
            if (pos != item.size() || v < 1) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            std::cerr << "error: --n expects a positive integer or comma list, got '" << text
                      << "'\n";
            std::exit(kExitValidation);
        }
    }
    if (out.empty()) {
        std::cerr << "error: --n must not be empty\n";
        std::exit(kExitValidation);
    }
    return out;
}

struct PairSpec {
    std::string f = "t";
    std::string g = "t";
    double a = 0.0;
    double b = 1.0;
};

using PairHandle = std::unique_ptr<stj_pair, decltype(&stj_pair_free)>;

PairHandle make_pair_handle(const PairSpec& spec) {
    stj_pair* pair = nullptr;
    const stj_status status = stj_pair_create(spec.f.c_str(), spec.g.c_str(), spec.a, spec.b, &pair);
    if (status != STJ_OK) fail(status);
    return PairHandle(pair, &stj_pair_free);
}

// Shared --f/--g/--a/--b/--preset handling; the preset fills defaults and
// explicit flags override it.
struct PairOptions {
    PairSpec spec;
    std::string preset;
    CLI::Option* f_opt = nullptr;
    CLI::Option* g_opt = nullptr;
    CLI::Option* a_opt = nullptr;
    CLI::Option* b_opt = nullptr;

    void attach(CLI::App* cmd) {
        f_opt = cmd->add_option("--f", spec.f, "expression for f(t)");
        g_opt = cmd->add_option("--g", spec.g, "expression for g(t), with g' > 0");
        a_opt = cmd->add_option("--a", spec.a, "left endpoint");
        b_opt = cmd->add_option("--b", spec.b, "right endpoint");
        cmd->add_option("--preset", preset, "builtin catalog pair (see --preset help)");
    }

    PairSpec resolve() const {
        PairSpec out = spec;
        if (!preset.empty()) {
            const char* f = nullptr;
            const char* g = nullptr;
            double a = 0.0, b = 0.0;
            const stj_status status = stj_preset_lookup(preset.c_str(), &f, &g, &a, &b);
            if (status != STJ_OK) fail(status);
            if (!f_opt->count()) out.f = f;
            if (!g_opt->count()) out.g = g;
            if (!a_opt->count()) out.a = a;
            if (!b_opt->count()) out.b = b;
        }
        return out;
    }
};

int run_equalize(const std::string& w, const std::string& h, double a, double b, int n,
                 const std::string& method, int max_iter, Output& out) {
    stj_equalize_result* result = nullptr;
    stj_status status;
    if (method == "fixed-point")
        status = stj_equalize_fixed_point(w.c_str(), h.c_str(), a, b, n, max_iter, &result);
    else
        status = stj_equalize(w.c_str(), h.c_str(), a, b, n, &result);
    if (status != STJ_OK) fail(status);
    std::unique_ptr<stj_equalize_result, decltype(&stj_equalize_result_free)> guard(
        result, &stj_equalize_result_free);

    std::ostream& os = out.stream();
    os << "i,t\n";
    const size_t count = stj_equalize_result_points(result);
    for (size_t i = 0; i < count; ++i) os << i << ',' << fmt17(stj_equalize_result_point(result, i)) << '\n';

    std::cerr << "J = " << fmt17(stj_equalize_result_value(result))
              << "\nresidual = " << fmt17(stj_equalize_result_residual(result))
              << "\niterations = " << stj_equalize_result_iterations(result)
              << "\nconverged = " << (stj_equalize_result_converged(result) ? "yes" : "no") << '\n';
    return stj_equalize_result_converged(result) ? kExitOk : kExitConvergence;
}

int run_optimize(const PairSpec& spec, int n, int grid, Output& out) {
    PairHandle pair = make_pair_handle(spec);
    stj_optimize_result* result = nullptr;
    const stj_status status = grid > 0 ? stj_optimize_grid_dp(pair.get(), n, grid, &result)
                                       : stj_optimize(pair.get(), n, &result);
    if (status != STJ_OK) fail(status);
    std::unique_ptr<stj_optimize_result, decltype(&stj_optimize_result_free)> guard(
        result, &stj_optimize_result_free);

    std::ostream& os = out.stream();
    os << "i,t\n";
    const size_t count = stj_optimize_result_points(result);
    for (size_t i = 0; i < count; ++i) os << i << ',' << fmt17(stj_optimize_result_point(result, i)) << '\n';

    const double gap = stj_optimize_result_gap(result);
    std::cerr << "method = " << stj_optimize_result_method(result)
              << "\nlower_sum = " << fmt17(stj_optimize_result_lower_sum(result))
              << "\ngap = " << fmt17(gap) << "\nn_gap = " << fmt17(n * gap)
              << "\nsweeps = " << stj_optimize_result_iterations(result) << '\n';
    return kExitOk;
}

int run_rate(const PairSpec& spec, const std::vector<int>& ns, Output& out) {
    PairHandle pair = make_pair_handle(spec);
    stj_rate_report* report = nullptr;
    const stj_status status = stj_rate_study(pair.get(), ns.data(), ns.size(), &report);
    if (status != STJ_OK) fail(status);
    std::unique_ptr<stj_rate_report, decltype(&stj_rate_report_free)> guard(report,
                                                                            &stj_rate_report_free);

    std::ostream& os = out.stream();
    os << "n,gap,n_gap,C,extrapolated\n";
    const std::string constant = fmt17(stj_rate_report_constant(report));
    const std::string extrapolated = fmt17(stj_rate_report_extrapolated(report));
    for (size_t row = 0; row < stj_rate_report_rows(report); ++row) {
        os << stj_rate_report_n(report, row) << ',' << fmt17(stj_rate_report_gap(report, row))
           << ',' << fmt17(stj_rate_report_scaled_gap(report, row)) << ',' << constant << ','
           << extrapolated << '\n';
    }
    std::cerr << "relative_error = " << fmt17(stj_rate_report_relative_error(report)) << '\n';
    return kExitOk;
}

int run_constant(const PairSpec& spec, Output& out) {
    PairHandle pair = make_pair_handle(spec);
    double value = 0.0;
    const stj_status status = stj_asymptotic_constant(pair.get(), &value);
    if (status != STJ_OK) fail(status);
    out.stream() << fmt17(value) << '\n';
    return kExitOk;
}

int run_check(const PairSpec& spec, uint64_t seed, int cases, Output& out) {
    PairHandle pair = make_pair_handle(spec);
    stj_check_report* report = nullptr;
    const stj_status status = stj_run_checks(pair.get(), seed, cases, &report);
    if (status != STJ_OK) fail(status);
    std::unique_ptr<stj_check_report, decltype(&stj_check_report_free)> guard(
        report, &stj_check_report_free);

    std::ostream& os = out.stream();
    int failed = 0;
    for (size_t i = 0; i < stj_check_report_suites(report); ++i) {
        const int pass = stj_check_report_passed(report, i);
        const int fail_count = stj_check_report_failed(report, i);
        failed += fail_count;
        os << stj_check_report_suite_name(report, i) << ": " << pass << '/'
           << (pass + fail_count) << " passed";
        const char* detail = stj_check_report_detail(report, i);
        if (detail[0] != '\0') os << " (" << detail << ')';
        os << '\n';
    }
    if (failed > 0) {
        std::cerr << "error: " << failed << " inequality check(s) failed\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equalized and optimal partitions for lower Riemann-Stieltjes sums"};
    app.require_subcommand(1);

    std::string out_path = "-";
    auto add_out = [&out_path](CLI::App* cmd) {
        cmd->add_option("--out", out_path, "output path for results (default: stdout)")
            ->capture_default_str();
    };

    std::string preset_help = "available presets:";
    for (size_t i = 0; i < stj_preset_count(); ++i)
        preset_help += std::string(" ") + stj_preset_name(i);
    app.footer(preset_help);

    // equalize
    auto* equalize_cmd =
        app.add_subcommand("equalize", "partition [a,b] so (t_i - t_{i-1}) max w max h is constant");
    // the weight flag --h needs the single-dash help shorthand out of the way
    equalize_cmd->set_help_flag("--help", "print help");
    std::string w_src = "1", h_src = "1";
    double eq_a = 0.0, eq_b = 1.0;
    std::string eq_n = "4";
    std::string method = "bisect";
    int max_iter = 10000;
    equalize_cmd->add_option("--w", w_src, "nonnegative weight w(t)");
    equalize_cmd->add_option("--h", h_src, "strictly positive weight h(t)");
    equalize_cmd->add_option("--a", eq_a, "left endpoint");
    equalize_cmd->add_option("--b", eq_b, "right endpoint");
    equalize_cmd->add_option("--n", eq_n, "number of subintervals");
    equalize_cmd->add_option("--method", method, "bisect (reference) or fixed-point")
        ->check(CLI::IsMember({"bisect", "fixed-point"}));
    equalize_cmd->add_option("--max-iter", max_iter, "iteration budget for --method fixed-point");
    add_out(equalize_cmd);

    // optimize
    auto* optimize_cmd =
        app.add_subcommand("optimize", "maximize the lower Riemann-Stieltjes sum over n-divisions");
    PairOptions optimize_pair;
    optimize_pair.attach(optimize_cmd);
    std::string opt_n = "8";
    int opt_grid = 0;
    optimize_cmd->add_option("--n", opt_n, "number of subintervals");
    optimize_cmd->add_option("--grid", opt_grid,
                             "use the exhaustive grid DP with this many grid points");
    add_out(optimize_cmd);

    // rate
    auto* rate_cmd = app.add_subcommand("rate", "convergence of n*gap toward the constant C");
    PairOptions rate_pair;
    rate_pair.attach(rate_cmd);
    std::string rate_n = "4,8,16,32,64";
    uint64_t rate_seed = 1;
    rate_cmd->add_option("--n", rate_n, "comma list of subinterval counts")->capture_default_str();
    rate_cmd->add_option("--seed", rate_seed, "accepted for reproducible pipelines");
    add_out(rate_cmd);

    // constant
    auto* constant_cmd =
        app.add_subcommand("constant", "the limit constant 1/2 (integral sqrt(|f'| g'))^2");
    PairOptions constant_pair;
    constant_pair.attach(constant_cmd);
    add_out(constant_cmd);

    // check
    auto* check_cmd =
        app.add_subcommand("check", "run the randomized inequality suites on the pair");
    PairOptions check_pair;
    check_pair.attach(check_cmd);
    uint64_t check_seed = 1;
    int check_cases = 100;
    check_cmd->add_option("--seed", check_seed, "RNG seed (runs are deterministic per seed)")
        ->capture_default_str();
    check_cmd->add_option("--cases", check_cases, "cases per suite")->capture_default_str();
    add_out(check_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitValidation;
    }

    Output out(out_path);

    if (equalize_cmd->parsed()) {
        const std::vector<int> ns = parse_n_list(eq_n);
        if (ns.size() != 1) {
            std::cerr << "error: equalize takes a single --n\n";
            return kExitValidation;
        }
        return run_equalize(w_src, h_src, eq_a, eq_b, ns[0], method, max_iter, out);
    }
    if (optimize_cmd->parsed()) {
        const std::vector<int> ns = parse_n_list(opt_n);
        if (ns.size() != 1) {
            std::cerr << "error: optimize takes a single --n\n";
            return kExitValidation;
        }
        return run_optimize(optimize_pair.resolve(), ns[0], opt_grid, out);
    }
    if (rate_cmd->parsed()) return run_rate(rate_pair.resolve(), parse_n_list(rate_n), out);
    if (constant_cmd->parsed()) return run_constant(constant_pair.resolve(), out);
    if (check_cmd->parsed()) return run_check(check_pair.resolve(), check_seed, check_cases, out);

    return kExitValidation;
}
