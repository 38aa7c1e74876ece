#pragma once

#include <stdexcept>
#include <string>

namespace liq {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, long line = 0)
        : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_ = 0;
};

// Input violates a documented invariant (non-monotone timestamps, ask < bid, ...).
class ValidationError : public Error {
public:
    ValidationError(const std::string& what, long line = 0)
        : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_ = 0;
};

// Bad configuration (market calendar, tick size, batch scheme, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Value outside an operation's mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// Least-squares fit cannot be carried out (rank deficiency, too few rows).
class FitError : public Error {
public:
    using Error::Error;
};

}  // namespace liq
