// errors.hpp — exception types shared by the numeric core and the scenario runner

#pragma once

#include <stdexcept>
#include <string>

namespace mqsim {

// Argument outside the mathematical domain of an operation (negative frequency, t < 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Caller combined objects that do not belong together (sector or basis mismatch).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure did not reach its tolerance. Carries what it did achieve.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double estimate = 0.0, double error_bound = 0.0)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

// t·f(t) never reaches π/2 inside the search horizon.
class NoFormationError : public NumericError {
public:
    NoFormationError(const std::string& what, double supremum, double horizon)
        : NumericError(what, supremum, 0.0), horizon_(horizon) {}

    double supremum() const noexcept { return estimate(); }
    double horizon() const noexcept { return horizon_; }

private:
    double horizon_;
};

} // namespace mqsim
