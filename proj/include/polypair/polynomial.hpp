#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "polypair/complex.hpp"
#include "polypair/errors.hpp"
#include "polypair/summation.hpp"

namespace polypair {

/// The roots X_1..X_n of p_n(z) = prod (z - X_j), with the derived statistics
/// used throughout: the mean Xbar and eta_n = max |X_j|.  Immutable after
/// construction; all operations on it are pure.
struct RootSet {
    std::vector<Complex> points;
    Complex mean{0.0, 0.0}; ///< Xbar = (1/n) sum X_j (cached)
    double eta = 0.0;       ///< eta_n = max_j |X_j| (cached)

    std::size_t n() const noexcept { return points.size(); }
};

/// Builds a RootSet, validating finiteness and caching mean/eta.
inline RootSet make_root_set(std::vector<Complex> pts) {
    if (pts.size() < 2)
        throw ArgumentError("root set: need at least 2 roots");
    for (const auto& p : pts) require_finite(p, "root");
    RootSet rs;
    rs.mean = pairwise_sum<Complex>(pts.size(), [&](std::size_t j) { return pts[j]; }) /
              static_cast<double>(pts.size());
    double m2 = 0.0;
    for (const auto& p : pts) m2 = std::max(m2, abs2(p));
    rs.eta = std::sqrt(m2);
    rs.points = std::move(pts);
    return rs;
}

/// The two log-derivative sums at a point z off the roots:
///   S1 = sum 1/(z - X_j) = p'/p,    S2 = sum 1/(z - X_j)^2 = S1^2 - p''/p,
/// plus the distance to the nearest root.
struct LogDerivSums {
    Complex s1{0.0, 0.0};
    Complex s2{0.0, 0.0};
    double min_dist = 0.0;
};

namespace detail {

/// Pole guard: distances at or below this are treated as evaluation on a
/// root (an error), never as +/-Inf to propagate.
constexpr double kPoleDistance = 1e-300;

/// Reciprocal that stays correct when |d|^2 would under/overflow double.
inline Complex robust_inv(Complex d) {
    const double a2 = abs2(d);
    if (a2 > 1e-280 && a2 < 1e280) return inv(d);
    return 1.0 / d; // slow path: library division handles extreme scales
}

} // namespace detail

/// Evaluates S1, S2 with fixed-tree pairwise summation (reproducible across
/// runs; stable to ~1e-13 relative under root permutations).
///
/// Throws PoleError (carrying the root index) if z is within 1e-300 of a root.
inline LogDerivSums log_deriv_sums(const RootSet& roots, Complex z) {
    const auto& xs = roots.points;
    double min_a2 = std::numeric_limits<double>::infinity();
    std::size_t min_idx = 0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const double a2 = abs2(z - xs[j]);
        if (a2 < min_a2) { min_a2 = a2; min_idx = j; }
    }
    if (!(min_a2 > 0.0) || std::abs(z - xs[min_idx]) <= detail::kPoleDistance)
        throw PoleError("log_deriv_sums: z coincides with root " + std::to_string(min_idx),
                        min_idx);
    LogDerivSums out;
    out.s1 = pairwise_sum<Complex>(xs.size(), [&](std::size_t j) {
        return detail::robust_inv(z - xs[j]);
    });
    out.s2 = pairwise_sum<Complex>(xs.size(), [&](std::size_t j) {
        const Complex u = detail::robust_inv(z - xs[j]);
        return u * u;
    });
    out.min_dist = std::sqrt(min_a2);
    return out;
}

/// log |p_n(z)| = sum_j log |z - X_j|, overflow-free for n up to 1e6
/// (a sum of logs never leaves double range).  The point-list overload
/// accepts any multiset, including a single root.
inline double log_abs_poly(const std::vector<Complex>& xs, Complex z) {
    return pairwise_sum<double>(xs.size(), [&](std::size_t j) {
        const Complex d = z - xs[j];
        const double a2 = abs2(d);
        if (!(a2 > 0.0) || std::abs(d) <= detail::kPoleDistance)
            throw PoleError("log_abs_poly: z coincides with root " + std::to_string(j), j);
        if (a2 > 1e-280 && a2 < 1e280) return 0.5 * std::log(a2);
        return std::log(std::abs(d)); // slow path for extreme distances
    });
}

inline double log_abs_poly(const RootSet& roots, Complex z) {
    return log_abs_poly(roots.points, z);
}

/// Monic coefficients of prod (z - X_j), lowest degree first — a test oracle
/// only.  Coefficient expansion is numerically unstable at large degree, so
/// the degree is capped at 64.
inline std::vector<Complex> expand_coefficients(const RootSet& roots) {
    const auto& xs = roots.points;
    if (xs.size() > 64)
        throw SizeError("expand_coefficients: degree capped at 64 (coefficient oracle only)");
    std::vector<Complex> c{Complex{1.0, 0.0}};
    for (const auto& r : xs) {
        c.push_back(c.back());
        for (std::size_t k = c.size() - 1; k-- > 1;)
            c[k] = c[k - 1] - r * c[k];
        c[0] = -r * c[0];
    }
    return c;
}

/// Term-by-term differentiation of a coefficient vector (lowest degree
/// first).  A constant polynomial cannot be differentiated meaningfully here.
inline std::vector<Complex> derivative_coefficients(const std::vector<Complex>& coeffs) {
    if (coeffs.size() < 2)
        throw ArgumentError("derivative_coefficients: need degree >= 1");
    std::vector<Complex> out(coeffs.size() - 1);
    for (std::size_t k = 1; k < coeffs.size(); ++k)
        out[k - 1] = static_cast<double>(k) * coeffs[k];
    return out;
}

} // namespace polypair
