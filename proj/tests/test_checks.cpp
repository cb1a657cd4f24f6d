#include <doctest.h>

#include "stieltjes/catalog.hpp"
#include "stieltjes/checks.hpp"

using namespace stieltjes;

TEST_CASE("invariant suites pass on every catalog pair") {
    for (const CatalogEntry& entry : catalog()) {
        const FunctionPair fp = entry.make();
        const CheckReport report = run_invariant_suites(fp, 42, 40);
        REQUIRE(report.suites.size() == 5);
        for (const SuiteResult& suite : report.suites) {
            CAPTURE(entry.name);
            CAPTURE(suite.name);
            CAPTURE(suite.detail);
            CHECK(suite.failed == 0);
        }
        CHECK(report.all_passed());
        CHECK(report.total_failed() == 0);
    }
}

TEST_CASE("suites are deterministic under a fixed seed") {
    const FunctionPair fp = find_preset("sin-linear")->make();
    const CheckReport a = run_invariant_suites(fp, 7, 25);
    const CheckReport b = run_invariant_suites(fp, 7, 25);
    REQUIRE(a.suites.size() == b.suites.size());
    for (std::size_t i = 0; i < a.suites.size(); ++i) {
        CHECK(a.suites[i].name == b.suites[i].name);
        CHECK(a.suites[i].passed == b.suites[i].passed);
        CHECK(a.suites[i].failed == b.suites[i].failed);
        CHECK(a.suites[i].detail == b.suites[i].detail);
    }
}

TEST_CASE("constant f skips the sign-definite suite gracefully") {
    const FunctionPair flat =
        FunctionPair(Expression::parse("2"), Expression::parse("t"), Interval(0.0, 1.0));
    const CheckReport report = run_invariant_suites(flat, 3, 10);
    bool found = false;
    for (const SuiteResult& suite : report.suites) {
        if (suite.name == "local-expansion") {
            found = true;
            CHECK(suite.passed == 0);
            CHECK(suite.failed == 0);
            CHECK(suite.detail.find("skipped") != std::string::npos);
        } else {
            CHECK(suite.failed == 0);
        }
    }
    CHECK(found);
    CHECK(report.all_passed());
}

TEST_CASE("case count is validated") {
    const FunctionPair fp = find_preset("linear-linear")->make();
    CHECK_THROWS_AS(run_invariant_suites(fp, 1, 0), validation_error);
}

TEST_CASE("catalog entries all build valid pairs") {
    CHECK(catalog().size() >= 6);
    for (const CatalogEntry& entry : catalog()) CHECK_NOTHROW(entry.make());
    CHECK(find_preset("quad-linear").has_value());
    CHECK_FALSE(find_preset("no-such-pair").has_value());
}
