#pragma once

#include <stdexcept>
#include <string>

namespace icgb {

/// Malformed or inconsistent input data (files, annotations, signals).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter set that violates its documented invariants.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace icgb
