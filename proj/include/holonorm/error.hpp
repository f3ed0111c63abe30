#pragma once

#include <stdexcept>
#include <string>

namespace holonorm {

/// Raised for rejected inputs: invalid domains, misaligned shifts, bad
/// exponents, malformed expressions or CSV files. The CLI maps it to exit 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace holonorm
