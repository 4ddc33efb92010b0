// hapsgnss error types
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hapsgnss {

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Malformed input text (RINEX, CSV, scenario files).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    /// 1-based line number, 0 when not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input data is well formed but unusable (no ephemeris, stale ephemeris, ...).
class DataError : public Error {
public:
    using Error::Error;
};

/// An iterative numerical routine failed to converge.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Scenario description violates its invariants.
class ScenarioError : public Error {
public:
    using Error::Error;
};

} // namespace hapsgnss
