#pragma once

#include <stdexcept>
#include <string>

namespace gwphase {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (bad sizes, bad arguments).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Base of failures that come from the numerics rather than from the caller.
class NumericalError : public Error {
public:
    using Error::Error;
};

class SolverFailure : public NumericalError {
public:
    SolverFailure(const std::string& what, double residual)
        : NumericalError(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// Non-finite state during time stepping.
class BlowUp : public NumericalError {
public:
    BlowUp(const std::string& what, double time) : NumericalError(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

class NearDegeneracy : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Left and right eigenvectors have (nearly) become self-orthogonal.
class ExceptionalPoint : public NumericalError {
public:
    ExceptionalPoint(const std::string& what, double overlap)
        : NumericalError(what), overlap_(overlap) {}
    double overlap() const { return overlap_; }

private:
    double overlap_;
};

class BranchCollision : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The tracked eigenvector (or polarization) does not return to itself.
class NonCyclic : public NumericalError {
public:
    NonCyclic(const std::string& what, double overlap)
        : NumericalError(what), overlap_(overlap) {}
    double overlap() const { return overlap_; }

private:
    double overlap_;
};

}  // namespace gwphase
