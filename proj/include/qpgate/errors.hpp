#pragma once

#include <stdexcept>
#include <string>

namespace qpgate {

// Violated precondition or malformed input. CLI maps this to exit code 2.
struct ContractError : std::invalid_argument {
  explicit ContractError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerical-validity failure (sampling, aliasing, unattainable root).
// CLI maps this to exit code 3.
struct ValidityError : std::runtime_error {
  explicit ValidityError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qpgate
