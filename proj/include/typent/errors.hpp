#pragma once

#include <stdexcept>
#include <string>

namespace typent {

// Invalid arguments: bad dimensions, out-of-range parameters, unsupported k.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Vectors of different length where equal lengths are required.
class DimensionError : public DomainError {
public:
    using DomainError::DomainError;
};

// A requested constrained problem has no interior solution.
class FeasibilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An iterative method stopped before reaching its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_residual)
        : std::runtime_error(what), last_residual_(last_residual) {}

    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

// A value is too large for double precision; use the log-domain variant.
class MagnitudeError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

// Quadrature could not reach the requested tolerance.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double estimate, double error)
        : std::runtime_error(what), estimate_(estimate), error_(error) {}

    double estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_; }

private:
    double estimate_;
    double error_;
};

}  // namespace typent
