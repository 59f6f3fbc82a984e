#pragma once

#include <stdexcept>
#include <string>

namespace gfess {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation of a transfer function at (or numerically at) one of its poles.
class PoleHitError : public Error {
public:
    using Error::Error;
};

/// The magnitude response never drops below the -3 dB threshold on the search interval.
class NoCrossingError : public Error {
public:
    using Error::Error;
};

/// A pole at the origin survives s-factor cancellation: the step response is unbounded.
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// The denominator has a root with non-negative real part.
class InstabilityError : public Error {
public:
    using Error::Error;
};

class InvalidParameterError : public Error {
public:
    InvalidParameterError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A simplified loop model (or a bandwidth formula) has a zero or negative denominator.
class DegenerateModelError : public Error {
public:
    using Error::Error;
};

/// Integration produced a NaN or infinity.
class NonFiniteStateError : public Error {
public:
    NonFiniteStateError(double time_s, const std::string& what)
        : Error(what + " at t=" + std::to_string(time_s) + " s"), time_s_(time_s) {}

    double time_s() const noexcept { return time_s_; }

private:
    double time_s_;
};

}  // namespace gfess
