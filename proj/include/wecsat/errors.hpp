#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wecsat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input lies outside the domain where an expression is defined
/// (active load, non-positive resistance, invalid plant parameters, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An expression hit a pole: z = -1, Gamma = 1, a vanishing denominator.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// The plant reduces to a degenerate circuit (zero mechanical impedance,
/// zero denominator in the reactance ratio).
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// A requested constraint target cannot be met.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// An iterative solve ran out of iterations. Carries the residual history.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> residuals)
        : Error(what), residuals_(std::move(residuals)) {}

    const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

/// The time-domain integration produced a non-finite state.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::vector<std::string> trace)
        : Error(what), trace_(std::move(trace)) {}

    const std::vector<std::string>& trace() const noexcept { return trace_; }

private:
    std::vector<std::string> trace_;
};

/// The per-step voltage/current loop of the simulator has no unique solution.
class AlgebraicLoopError : public Error {
public:
    using Error::Error;
};

/// A sampled record does not span an integer number of periods.
class WindowingError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace wecsat
