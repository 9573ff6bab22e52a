#pragma once

#include <stdexcept>
#include <string>

namespace spdcpol {

/// Malformed or invalid configuration (parse errors, invariant violations).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: degenerate (zero-norm) amplitude, grid sizing violation.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad input data (count CSV ingestion, fit preconditions).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace spdcpol
