#pragma once

#include <cmath>
#include <complex>

#include "polypair/errors.hpp"

namespace polypair {

/// The universal scalar: a point in the complex plane stored as a
/// double-precision (re, im) pair.
using Complex = std::complex<double>;

/// |z|^2 without the sqrt of std::abs.
inline double abs2(Complex z) noexcept {
    return z.real() * z.real() + z.imag() * z.imag();
}

/// Fast reciprocal 1/z = conj(z)/|z|^2.
///
/// One real division instead of the robust-but-slow libgcc __divdc3 path.
/// Safe for the moderate magnitudes used throughout (|z| in [1e-300, 1e150]);
/// callers that may hit exact poles must check |z| themselves first.
inline Complex inv(Complex z) noexcept {
    const double s = 1.0 / abs2(z);
    return {z.real() * s, -z.imag() * s};
}

/// a/b via the fast reciprocal.
inline Complex div(Complex a, Complex b) noexcept {
    return a * inv(b);
}

inline bool is_finite(Complex z) noexcept {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Validates that a point has finite coordinates (the ComplexPoint invariant).
inline Complex require_finite(Complex z, const char* what) {
    if (!is_finite(z))
        throw ArgumentError(std::string(what) + ": coordinates must be finite");
    return z;
}

} // namespace polypair
