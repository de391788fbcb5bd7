///
/// \file errors.hpp
///
/// Exception types thrown by the krein library.
///
#pragma once

#include <stdexcept>
#include <string>

namespace krein
{

/// Base class of every error raised by the library.
class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: non-increasing grids, mismatched lengths, r <= 0, ...
class invalid_input : public error
{
public:
    using error::error;
};

/// Spectral parameter outside the half-plane where a quantity is defined.
class domain_error : public error
{
public:
    using error::error;
};

/// log of the density is not integrable on the window.
class szego_violation : public error
{
public:
    using error::error;
};

/// A mathematically impossible value appeared (zero of P_* on the real axis,
/// vanishing kernel diagonal). Indicates loss of precision.
class integrity_error : public error
{
public:
    using error::error;
};

/// lambda == conj(mu) in the Christoffel-Darboux quotient.
class degenerate_pair : public error
{
public:
    using error::error;
};

/// Moment matrix is not positive definite.
class degenerate_measure : public error
{
public:
    using error::error;
};

/// Normal equations could not be factorized even after ridge regularization.
class ill_conditioned : public error
{
public:
    ill_conditioned(const std::string& what, double rcond)
        : error(what + " (rcond estimate " + std::to_string(rcond) + ")"),
          m_rcond(rcond)
    {
    }

    double rcond() const noexcept
    {
        return m_rcond;
    }

private:
    double m_rcond;
};

} // namespace krein
