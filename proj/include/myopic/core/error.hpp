#pragma once

#include <stdexcept>
#include <string>

namespace myopic {

// Base of every error raised by the library. Messages carry the short
// reason first ("unknown class", "infeasible", ...) so callers can match.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class Infeasible : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

// Raised when a runtime-verified inequality or invariant fails.
class MonitorViolation : public Error {
public:
    using Error::Error;
};

} // namespace myopic
