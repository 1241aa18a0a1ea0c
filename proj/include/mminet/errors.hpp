#pragma once

#include <stdexcept>
#include <string>

namespace mminet {

// Bad or malformed input data (missing file, unparseable cell, empty class...).
// CLI maps this family to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown during a computation (non-finite loss or gradient).
// CLI maps this family to exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mminet
