#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polypair {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A caller violated an operation precondition (bad argument values).
struct ArgumentError : Error {
    using Error::Error;
};

/// An instance exceeds a documented size cap (e.g. coefficient oracle degree,
/// exact-matching cap).
struct SizeError : Error {
    using Error::Error;
};

/// Evaluation was requested at a point excluded from the operation's domain
/// (an atom of an empirical measure, the unit circle itself, ...).
struct DomainError : Error {
    using Error::Error;
};

/// The requested quantity does not exist for this measure kind
/// (e.g. a density for a singular measure).
struct UnsupportedError : Error {
    using Error::Error;
};

/// Evaluation hit a pole: the query point coincides with a root.
struct PoleError : Error {
    PoleError(const std::string& what, std::size_t root_index)
        : Error(what), index(root_index) {}
    std::size_t index; ///< index of the offending root
};

/// Iterative solve failed to converge within the iteration budget.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, double residual, std::size_t point_index)
        : Error(what), worst_residual(residual), index(point_index) {}
    double worst_residual;
    std::size_t index; ///< iterate with the worst residual
};

/// A denominator is too ill-conditioned to trust the result.
struct ConditioningError : Error {
    using Error::Error;
};

/// A statistical report was requested from too few samples.
struct InsufficientDataError : Error {
    using Error::Error;
};

/// A file could not be parsed; `row` is the 1-based offending line.
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t row_number)
        : Error(what), row(row_number) {}
    std::size_t row;
};

/// A file could not be opened/read/written.
struct IoError : Error {
    using Error::Error;
};

} // namespace polypair
