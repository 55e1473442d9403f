#pragma once

#include <stdexcept>
#include <string>

namespace gkdv {

/// Bad input: invalid parameters, malformed config, contract violations.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: blow-up, non-convergence, leaving the admissible cone.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gkdv
