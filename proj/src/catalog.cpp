#include "stieltjes/catalog.hpp"

#include <cmath>

namespace stieltjes {

FunctionPair CatalogEntry::make() const {
    return FunctionPair(Expression::parse(f), Expression::parse(g), Interval(a, b));
}

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = {
        {"linear-linear", "t", "t", 0.0, 1.0},
        {"quad-linear", "t^2", "t", 0.0, 1.0},
        {"sin-linear", "sin(t)", "t", 0.0, M_PI},
        {"parabola-linear", "t^2 - t", "t", 0.0, 1.0},
        {"cubic-mix", "t^3 - t", "t^2/2 + t", 0.0, 1.0},
        {"exp-log", "exp(t)", "ln(t + 2)", 0.0, 1.0},
    };
    return entries;
}

std::optional<CatalogEntry> find_preset(const std::string& name) {
    for (const CatalogEntry& e : catalog())
        if (e.name == name) return e;
    return std::nullopt;
}

} // namespace stieltjes
