#pragma once

#include <stdexcept>
#include <string>

namespace qlab {

/// Invalid or inconsistent user-supplied configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure: overflow, non-convergence, out-of-range target (exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem failure while reading inputs or writing outputs (exit code 4).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qlab
