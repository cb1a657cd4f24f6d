#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "stieltjes/expr.hpp"

using namespace stieltjes;

namespace {

bool parses_to(const std::string& src, const Expression& expected) {
    return Expression::parse(src).structurally_equal(expected);
}

// Random grammar-covering expressions for the property suites.
Expression random_expression(std::mt19937_64& rng, int depth) {
    auto coin = [&](double p) { return std::uniform_real_distribution<>(0, 1)(rng) < p; };
    auto constant = [&] {
        return Expression::constant(std::uniform_real_distribution<>(-3.0, 3.0)(rng));
    };
    if (depth <= 0) return coin(0.7) ? Expression::variable() : constant();

    switch (std::uniform_int_distribution<>(0, 12)(rng)) {
        case 0: return Expression::variable();
        case 1: return constant();
        case 2: return Expression::add(random_expression(rng, depth - 1), random_expression(rng, depth - 1));
        case 3: return Expression::sub(random_expression(rng, depth - 1), random_expression(rng, depth - 1));
        case 4: return Expression::mul(random_expression(rng, depth - 1), random_expression(rng, depth - 1));
        case 5: return Expression::div(random_expression(rng, depth - 1), random_expression(rng, depth - 1));
        case 6: {
            const double exps[] = {2.0, 3.0, 0.5, 1.5, -1.0};
            return Expression::pow(random_expression(rng, depth - 1),
                                   exps[std::uniform_int_distribution<>(0, 4)(rng)]);
        }
        case 7: return Expression::neg(random_expression(rng, depth - 1));
        case 8: return Expression::sin(random_expression(rng, depth - 1));
        case 9: return Expression::cos(random_expression(rng, depth - 1));
        case 10: return Expression::exp(random_expression(rng, depth - 1));
        case 11: return Expression::ln(random_expression(rng, depth - 1));
        case 12: return coin(0.5) ? Expression::sqrt(random_expression(rng, depth - 1))
                                  : Expression::abs(random_expression(rng, depth - 1));
    }
    return Expression::variable();
}

bool evaluates(const Expression& e, double t, double* out = nullptr) {
    try {
        const double v = e(t);
        if (out) *out = v;
        return true;
    } catch (const eval_error&) {
        return false;
    }
}

} // namespace

TEST_CASE("parse basics") {
    CHECK(parses_to("t", Expression::variable()));
    CHECK(parses_to("t^2 + 3*t",
                    Expression::add(Expression::pow(Expression::variable(), 2.0),
                                    Expression::mul(Expression::constant(3.0), Expression::variable()))));
    CHECK(parses_to("  2.5e-1 ", Expression::constant(0.25)));
    CHECK(parses_to("sin(cos(t))", Expression::sin(Expression::cos(Expression::variable()))));
}

TEST_CASE("parse precedence and associativity") {
    // power binds tighter than unary minus
    CHECK(parses_to("-t^2", Expression::neg(Expression::pow(Expression::variable(), 2.0))));
    // left associativity
    CHECK(parses_to("t - t - t",
                    Expression::sub(Expression::sub(Expression::variable(), Expression::variable()),
                                    Expression::variable())));
    CHECK(parses_to("t/t/t",
                    Expression::div(Expression::div(Expression::variable(), Expression::variable()),
                                    Expression::variable())));
    CHECK(parses_to("t + t*t",
                    Expression::add(Expression::variable(),
                                    Expression::mul(Expression::variable(), Expression::variable()))));
    // constant exponents may be written as folded expressions
    CHECK(parses_to("t^(1 + 1)", Expression::pow(Expression::variable(), 2.0)));
    CHECK(parses_to("t^-2", Expression::pow(Expression::variable(), -2.0)));
}

TEST_CASE("parse errors carry byte offsets") {
    CHECK_THROWS_WITH_AS(Expression::parse(""), doctest::Contains("empty"), parse_error);

    try {
        Expression::parse("sin(t");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.offset() == 5);
    }

    try {
        Expression::parse("x + 1");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.offset() == 0);
        CHECK(std::string(e.what()).find("unknown identifier") != std::string::npos);
    }

    try {
        Expression::parse("sin(y)");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.offset() == 4);
    }

    CHECK_THROWS_AS(Expression::parse("t^t"), parse_error);
    CHECK_THROWS_AS(Expression::parse("2^t"), parse_error);
    CHECK_THROWS_AS(Expression::parse("1 + "), parse_error);
    CHECK_THROWS_AS(Expression::parse("(t"), parse_error);
}

TEST_CASE("evaluate") {
    CHECK(Expression::parse("t^2 + 3*t")(2.0) == doctest::Approx(10.0));
    CHECK(Expression::parse("sin(t)")(0.0) == doctest::Approx(0.0));
    CHECK(Expression::parse("exp(ln(t))")(2.5) == doctest::Approx(2.5));
    CHECK(Expression::parse("abs(1 - t)")(3.0) == doctest::Approx(2.0));

    CHECK_THROWS_AS(Expression::parse("ln(t)")(0.0), eval_error);
    CHECK_THROWS_AS(Expression::parse("ln(t)")(-1.0), eval_error);
    CHECK_THROWS_AS(Expression::parse("1/t")(0.0), eval_error);
    CHECK_THROWS_AS(Expression::parse("sqrt(t)")(-0.5), eval_error);
    // overflow surfaces as an error, never as a silent non-finite value
    CHECK_THROWS_AS(Expression::parse("exp(exp(exp(t)))")(10.0), eval_error);
}

TEST_CASE("differentiate product rule and constants") {
    const Derivative d = differentiate(Expression::parse("t*sin(t)"));
    CHECK(d.expr.structurally_equal(Expression::parse("sin(t) + t*cos(t)")));
    CHECK(d.nondifferentiable_args.empty());

    const Derivative dc = differentiate(Expression::parse("4.25"));
    double v = -1;
    CHECK(dc.expr.is_constant(&v));
    CHECK(v == 0.0);
}

TEST_CASE("derivative of t^3 matches a central difference at t=2") {
    const Derivative d = differentiate(Expression::parse("t^3"));
    const Expression e = Expression::parse("t^3");
    const double h = 1e-5;
    const double fd = (e(2.0 + h) - e(2.0 - h)) / (2.0 * h);
    CHECK(d.expr(2.0) == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(std::fabs(d.expr(2.0) - fd) < 1e-6);
}

TEST_CASE("abs differentiates to the sign convention with recorded kinks") {
    const Derivative d = differentiate(Expression::parse("abs(t - 1)"));
    REQUIRE(d.nondifferentiable_args.size() == 1);
    CHECK(d.nondifferentiable_args[0].structurally_equal(Expression::parse("t - 1")));
    CHECK(d.expr(2.0) == doctest::Approx(1.0));
    CHECK(d.expr(0.0) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(d.expr(1.0), eval_error); // the kink itself is a domain error
}

TEST_CASE("print/parse round-trip on hand-picked forms") {
    for (const char* src : {
             "t",
             "t^2 + 3*t",
             "-t^2",
             "t - (t + 1)",
             "(t + 1)*(t - 1)",
             "t/(1 + t^2)",
             "sin(t)*cos(t) - exp(-t)",
             "sqrt(abs(cos(t)))",
             "ln(t + 2)/t",
             "2*-3 + t",
             "t^-1.5",
             "1e-3*t + 2.5E2",
         }) {
        const Expression e = Expression::parse(src);
        const Expression round = Expression::parse(e.to_string());
        CAPTURE(src);
        CAPTURE(e.to_string());
        CHECK(round.structurally_equal(e));
    }
}

TEST_CASE("print/parse round-trip on random expressions") {
    std::mt19937_64 rng(20240811);
    for (int i = 0; i < 500; ++i) {
        const Expression e = random_expression(rng, 4);
        const std::string text = e.to_string();
        CAPTURE(text);
        const Expression round = Expression::parse(text);
        CHECK(round.structurally_equal(e));
    }
}

TEST_CASE("symbolic derivative agrees with central finite differences") {
    std::mt19937_64 rng(987654321);
    int tested = 0;
    int failures = 0;

    for (int k = 0; k < 100; ++k) {
        const Expression e = random_expression(rng, 4);
        const Derivative d = differentiate(e);

        for (int p = 0; p < 100; ++p) {
            const double t = std::uniform_real_distribution<>(-2.0, 2.0)(rng);
            const double h = 1e-6 * (1.0 + std::fabs(t));

            double dv, left, right, center, left2, right2;
            if (!evaluates(d.expr, t, &dv) || !evaluates(e, t - h, &left) ||
                !evaluates(e, t + h, &right) || !evaluates(e, t, &center) ||
                !evaluates(e, t - 0.5 * h, &left2) || !evaluates(e, t + 0.5 * h, &right2))
                continue;
            // extreme magnitudes make the difference quotient meaningless
            if (std::fabs(dv) > 1e6 || std::fabs(center) > 1e5 * (1.0 + std::fabs(dv))) continue;
            // the oracle itself must be trustworthy: halving the step has
            // to reproduce the quotient, otherwise t sits too close to a
            // singularity or an oscillation finer than h
            const double fd_h = (right - left) / (2.0 * h);
            const double fd_h2 = (right2 - left2) / h;
            if (std::fabs(fd_h - fd_h2) > 2.5e-6 * (1.0 + std::fabs(fd_h2))) continue;

            // stay away from recorded non-differentiability sets
            bool near_kink = false;
            for (const Expression& arg : d.nondifferentiable_args) {
                double u0, u1, u2;
                if (!evaluates(arg, t - 1e-4, &u0) || !evaluates(arg, t, &u1) ||
                    !evaluates(arg, t + 1e-4, &u2)) {
                    near_kink = true;
                    break;
                }
                if (std::fabs(u1) < 1e-6 || (u0 < 0) != (u1 < 0) || (u1 < 0) != (u2 < 0)) {
                    near_kink = true;
                    break;
                }
            }
            if (near_kink) continue;

            const double fd = (4.0 * fd_h2 - fd_h) / 3.0; // Richardson-improved quotient
            ++tested;
            if (std::fabs(dv - fd) > 1e-5 * (1.0 + std::fabs(dv))) {
                ++failures;
                CAPTURE(e.to_string());
                CAPTURE(t);
                CHECK(std::fabs(dv - fd) <= 1e-5 * (1.0 + std::fabs(dv)));
            }
        }
    }
    CHECK(failures == 0);
    CHECK(tested > 3000); // the exclusions must not hollow out the suite
}

TEST_CASE("expressions fold constants but keep domain errors") {
    double v = 0;
    CHECK(Expression::parse("2*3 + 1").is_constant(&v));
    CHECK(v == 7.0);
    CHECK(Expression::parse("sin(0)").is_constant(&v));
    CHECK(v == 0.0);
    // ln(-1) folds lazily: the error belongs to evaluation
    const Expression bad = Expression::parse("ln(0 - 1)");
    CHECK_THROWS_AS(bad(0.0), eval_error);
}
