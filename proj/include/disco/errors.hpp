#ifndef DISCO_ERRORS_HPP
#define DISCO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace disco {

/// Invalid configuration: bad parameter values, malformed config files,
/// inconsistent profile definitions. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem problems: unreadable config, unwritable output. CLI exit code 3.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: non-convergent root finds, singular information
/// matrices, degenerate covariances. CLI exit code 4.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace disco

#endif
