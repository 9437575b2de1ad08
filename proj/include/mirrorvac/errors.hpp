#pragma once

#include <stdexcept>
#include <string>

namespace mirrorvac {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid physical parameters (non-positive mass, frequency, length, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A call that is well-typed but not meaningful (coordinate on a wall,
/// empty frequency list, wrong cavity tag, ...).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Inputs that leave nothing to compute, e.g. a sharp cutoff below the
/// first cavity mode.
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Truncated Hilbert space larger than the configured limit.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// An iterative method (quadrature, eigensolver) failed to reach its
/// tolerance. Carries the best estimate so sweeps can record it.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_estimate, double achieved_tolerance)
        : Error(what), best_estimate_(best_estimate), achieved_tolerance_(achieved_tolerance) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double achieved_tolerance() const noexcept { return achieved_tolerance_; }

private:
    double best_estimate_;
    double achieved_tolerance_;
};

/// Eigensolver failure, with the iteration count and last residual.
class SolverError : public Error {
public:
    SolverError(const std::string& what, int iterations, double residual)
        : Error(what), iterations_(iterations), residual_(residual) {}

    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

}  // namespace mirrorvac
