#pragma once

#include <stdexcept>
#include <string>

namespace hyperact {

/// Invalid configuration: bad dimensions, fractions, probabilities or keys.
/// The command-line tool maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Matrix dimension mismatch. Messages name both offending shapes.
class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// Non-finite values or other numeric breakdown at runtime.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hyperact
