#pragma once

#include <stdexcept>
#include <string>

namespace springs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Argument outside the representable range of a special function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Non-finite spring state produced while propagating at `omega`.
class PropagationError : public Error {
public:
    PropagationError(double omega, const std::string& what)
        : Error("propagation failed at omega = " + std::to_string(omega) + ": " + what),
          omega_(omega) {}
    double omega() const { return omega_; }

private:
    double omega_;
};

/// Linear system whose condition estimate makes its solution meaningless.
class NearSingularError : public Error {
public:
    NearSingularError(double condition, const std::string& what)
        : Error(what + " (condition estimate " + std::to_string(condition) + ")"),
          condition_(condition) {}
    double condition() const { return condition_; }

private:
    double condition_;
};

class NotControllableError : public Error {
public:
    NotControllableError(int rank, int dimension, const std::string& what)
        : Error(what + " (Kalman rank " + std::to_string(rank) + " < " +
                std::to_string(dimension) + ")"),
          rank_(rank) {}
    int rank() const { return rank_; }

private:
    int rank_;
};

class UnreachableTargetError : public Error {
public:
    UnreachableTargetError(int rank, double residual, const std::string& what)
        : Error(what + " (controllability rank " + std::to_string(rank) +
                ", relative residual " + std::to_string(residual) + ")"),
          rank_(rank), residual_(residual) {}
    int rank() const { return rank_; }
    double residual() const { return residual_; }

private:
    int rank_;
    double residual_;
};

/// Integration step too coarse for the requested accuracy.
class ResolutionError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace springs
