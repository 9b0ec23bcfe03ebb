#pragma once

#include <stdexcept>
#include <string>

namespace coherlss {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (odd B, Im z <= 0, bad ratio, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A function was asked to act outside its domain of definition.
class DomainError : public Error {
public:
    DomainError(const std::string& what, double offending)
        : Error(what), offending_(offending) {}

    double offending_value() const noexcept { return offending_; }

private:
    double offending_;
};

/// The data do not support the requested estimate (zero power on a row, all
/// lag-window estimates non-positive).
class DegenerateEstimate : public Error {
public:
    using Error::Error;
};

/// Quadrature did not converge or a computed quantity failed a sanity check.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// A run configuration violates an invariant. Carries the violated key.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace coherlss
