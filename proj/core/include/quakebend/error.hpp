#pragma once

#include <stdexcept>
#include <string>

namespace quakebend {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad arguments: malformed slopes, mismatched lengths, invalid schedules.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A geometric precondition failed (degenerate geodesic, parabolic input, ...).
class GeometryError : public Error {
public:
    using Error::Error;
};

/// An iterative or limiting procedure did not settle.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// A non-finite value appeared where a finite one was required.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace quakebend
