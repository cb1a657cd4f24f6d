#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stieltjes/function_space.hpp"

namespace stieltjes {

/// A named (f, g, [a, b]) test case; all entries satisfy the pair
/// contract (g' > 0, f' with finitely many zeros).
struct CatalogEntry {
    std::string name;
    std::string f;
    std::string g;
    double a;
    double b;

    FunctionPair make() const;
};

const std::vector<CatalogEntry>& catalog();

std::optional<CatalogEntry> find_preset(const std::string& name);

} // namespace stieltjes
