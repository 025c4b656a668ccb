#pragma once

#include <stdexcept>
#include <string>

namespace oqc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Requested inverse has no finite solution (e.g. a probability of exactly 1).
class UnboundedError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A configuration violates its invariants.
class ConfigError : public DomainError {
public:
    using DomainError::DomainError;
};

/// An iterative method stopped before meeting its tolerance.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double best_estimate)
        : Error(what), best_estimate_(best_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }

private:
    double best_estimate_;
};

/// Root finder was handed an interval without a sign change.
class BracketError : public Error {
public:
    using Error::Error;
};

/// A design target cannot be met by any parameter value.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Monte Carlo sampler could not produce a valid sample.
class SimulationError : public Error {
public:
    using Error::Error;
};

}  // namespace oqc
