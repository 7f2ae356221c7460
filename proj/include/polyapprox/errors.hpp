#pragma once

#include <stdexcept>
#include <string>

namespace polyapprox {

/// Invalid configuration or input that the caller can fix.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a usable result (rank
/// deficiency, NaN, divergence).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace polyapprox
