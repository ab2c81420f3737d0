#ifndef MIMOCAP_ERRORS_HPP
#define MIMOCAP_ERRORS_HPP

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace mimocap
{

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: dimension mismatch, bad vector length, unparsable file.
class InputError : public Error
{
public:
    using Error::Error;
};

/// Input outside the mathematical domain of an operation (non-PSD, singular, ...).
class DomainError : public Error
{
public:
    using Error::Error;
};

/// An operation was called while its documented precondition does not hold.
class PreconditionError : public Error
{
public:
    using Error::Error;
};

/// A solver was forced on an instance it cannot handle.
class RoutingError : public Error
{
public:
    using Error::Error;
};

/// Requested total power cannot be distributed under the per-antenna caps.
class InfeasibleError : public Error
{
public:
    using Error::Error;
};

/// Armijo backtracking could not find an acceptable step.
class StepError : public Error
{
public:
    using Error::Error;
};

/// Iteration budget exhausted. Carries the last (or best) iterate.
class ConvergenceError : public Error
{
public:
    ConvergenceError(const std::string& what, Eigen::MatrixXcd last_iterate)
        : Error(what), m_last(std::move(last_iterate))
    {
    }

    const Eigen::MatrixXcd& last_iterate() const noexcept { return m_last; }

private:
    Eigen::MatrixXcd m_last;
};

} // namespace mimocap

#endif
