#pragma once

#include <stdexcept>
#include <string>

namespace zoll {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A chart point or covector outside the domain of the chart it claims.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Numerical integration of the geodesic flow broke down.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double last_valid_time)
        : Error(what + " (last valid time " + std::to_string(last_valid_time) + ")"),
          last_valid_time_(last_valid_time) {}

    double last_valid_time() const noexcept { return last_valid_time_; }

private:
    double last_valid_time_;
};

/// Malformed region descriptor or configuration text.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::string key = {})
        : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Operation not available for this model, region or measure.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Violated operation precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Quadrature or eigen-solve could not reach the requested accuracy.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace zoll
