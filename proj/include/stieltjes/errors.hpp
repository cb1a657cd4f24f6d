#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stieltjes {

/// Expression text could not be parsed. `offset` is the 0-based byte
/// offset of the first offending character.
class parse_error : public std::runtime_error {
public:
    parse_error(std::string message, std::size_t offset)
        : std::runtime_error(std::move(message)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation left the domain of a node (ln of a non-positive value,
/// division by zero, sqrt of a negative, overflow to non-finite).
class eval_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input contract was violated (g' not positive, degenerate weight,
/// malformed partition, bad argument ranges).
class validation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative routine exhausted its budget before reaching tolerance.
class convergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace stieltjes
