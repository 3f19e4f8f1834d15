#pragma once

#include <stdexcept>
#include <string>

namespace qam {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A parameter violates a precondition (zero exponent, empty grid, ...).
struct InvalidParameter : Error {
    using Error::Error;
};

/// An evaluation point or interval lies outside a generator's validity range.
struct DomainError : Error {
    using Error::Error;
};

/// Root finding was asked for a value outside the bracketed image.
struct NoBracketError : Error {
    using Error::Error;
};

/// A quadrature routine could not meet its tolerance within budget.
struct QuadratureError : Error {
    using Error::Error;
};

/// Generator evaluation produced a non-finite value; message names the entry.
struct OverflowError : Error {
    using Error::Error;
};

/// Operation needs a second derivative the generator does not carry.
struct UnsupportedGenerator : Error {
    using Error::Error;
};

/// A grid-checked hypothesis of a criterion does not hold.
struct HypothesisViolated : Error {
    using Error::Error;
};

/// Requested construction geometry cannot be realized.
struct ConstructionInfeasible : Error {
    using Error::Error;
};

struct InternalError : Error {
    using Error::Error;
};

} // namespace qam
