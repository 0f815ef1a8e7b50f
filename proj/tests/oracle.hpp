#pragma once

// Independent reference implementations used only by the test suite.  Every
// routine here deliberately avoids the library's root-form code paths so a
// disagreement points at exactly one side:
//   - coefficient-form polynomial evaluation and a generic Aberth root finder
//     (validates the root-form critical-point solver),
//   - polar quadrature of the Cauchy transform integral (validates the
//     closed-form Stieltjes branches),
//   - brute-force matching (validates the assignment solver),
//   - finite differences (validates closed-form derivatives).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <vector>

#include "polypair/complex.hpp"

namespace oracle {

using polypair::Complex;

// ---------------------------------------------------------------------------
// Coefficient-form polynomials
// ---------------------------------------------------------------------------

/// Horner evaluation of sum c_k z^k, coefficients lowest-degree first.
inline Complex horner(const std::vector<Complex>& coeffs, Complex z) {
    Complex acc{0.0, 0.0};
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
    return acc;
}

/// Generic Aberth-Ehrlich iteration on explicit coefficients.  Intended for
/// small degrees (oracle scale); Gauss-Seidel updates, circle initial
/// guesses from the Cauchy bound.  Exact zero constant terms are stripped as
/// roots at the origin first.
inline std::vector<Complex> roots_from_coefficients(std::vector<Complex> coeffs) {
    while (coeffs.size() > 1 && coeffs.back() == Complex{0.0, 0.0}) coeffs.pop_back();
    std::vector<Complex> out;
    std::size_t zeros = 0;
    while (zeros + 1 < coeffs.size() && coeffs[zeros] == Complex{0.0, 0.0}) ++zeros;
    out.assign(zeros, Complex{0.0, 0.0});
    coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(zeros));
    const std::size_t deg = coeffs.size() - 1;
    if (deg == 0) return out;

    std::vector<Complex> dc(deg);
    for (std::size_t k = 1; k <= deg; ++k)
        dc[k - 1] = static_cast<double>(k) * coeffs[k];

    double bound = 0.0;
    for (std::size_t k = 0; k < deg; ++k)
        bound = std::max(bound, std::abs(coeffs[k] / coeffs[deg]));
    const double r0 = 1.0 + bound;

    std::vector<Complex> w(deg);
    for (std::size_t k = 0; k < deg; ++k) {
        const double th = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.25) /
                          static_cast<double>(deg);
        w[k] = r0 * Complex{std::cos(th), std::sin(th)};
    }

    for (int it = 0; it < 600; ++it) {
        double worst = 0.0;
        for (std::size_t i = 0; i < deg; ++i) {
            const Complex p = horner(coeffs, w[i]);
            if (p == Complex{0.0, 0.0}) continue;
            const Complex dp = horner(dc, w[i]);
            if (dp == Complex{0.0, 0.0}) {
                w[i] += Complex{1e-8, 1e-8};
                worst = 1.0;
                continue;
            }
            const Complex newton = p / dp;
            Complex s{0.0, 0.0};
            for (std::size_t j = 0; j < deg; ++j)
                if (j != i) s += 1.0 / (w[i] - w[j]);
            const Complex step = newton / (1.0 - newton * s);
            w[i] -= step;
            worst = std::max(worst, std::abs(step) / (1.0 + std::abs(w[i])));
        }
        if (worst < 1e-14) break;
    }
    out.insert(out.end(), w.begin(), w.end());
    return out;
}

// ---------------------------------------------------------------------------
// Point-cloud comparison
// ---------------------------------------------------------------------------

/// Symmetric Hausdorff distance between equal-or-unequal size clouds: the
/// worst nearest-neighbor distance in either direction.  For clouds whose
/// internal separations dwarf the tolerance this equals the optimal-matching
/// max distance.
inline double hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    auto one_sided = [](const std::vector<Complex>& from, const std::vector<Complex>& to) {
        double worst = 0.0;
        for (const Complex p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const Complex q : to) best = std::min(best, std::abs(p - q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

/// Exact W1 between equal-size uniform atomic clouds by exhausting all
/// permutations.  Factorial cost: guarded to n <= 8.
inline double w1_bruteforce(std::vector<Complex> a, std::vector<Complex> b) {
    const std::size_t n = a.size();
    if (n != b.size() || n == 0 || n > 8) return std::numeric_limits<double>::quiet_NaN();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = std::numeric_limits<double>::infinity();
    do {
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) cost += std::abs(a[i] - b[perm[i]]);
        best = std::min(best, cost);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on the
/// three-term recurrence.
inline void gauss_legendre(std::size_t m, std::vector<double>& x, std::vector<double>& w) {
    x.assign(m, 0.0);
    w.assign(m, 0.0);
    for (std::size_t i = 0; i < (m + 1) / 2; ++i) {
        double t = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(m) + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (std::size_t k = 2; k <= m; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * t * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(m) * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = -t;
        x[m - 1 - i] = t;
        w[i] = w[m - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

/// Cauchy transform integral(dmu(x)/(z-x)) of the uniform measure on
/// B(center, radius), by quadrature in polar form.
///
/// z strictly inside: rays from z.  Substituting x = z + s e^{i theta} turns
/// the integrand f/(z-x) into -f e^{-i theta} ds d theta (the Jacobian s
/// cancels the 1/s singularity exactly), and the radial integral of the
/// constant density is the exit distance S(theta) -- leaving a smooth
/// periodic function integrated by the trapezoid rule (spectral accuracy).
///
/// z strictly outside: polar about the disk center, radial Gauss-Legendre
/// times angular trapezoid on the (now singularity-free) integrand.
inline Complex stieltjes_disk_quad(Complex center, double radius, Complex z,
                                   std::size_t m_theta = 4096) {
    const Complex d = z - center;
    const double r2 = radius * radius;
    const double f = 1.0 / (std::numbers::pi * r2);
    if (polypair::abs2(d) < r2) {
        Complex acc{0.0, 0.0};
        for (std::size_t k = 0; k < m_theta; ++k) {
            const double th =
                2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m_theta);
            const double cs = std::cos(th), sn = std::sin(th);
            const double b = d.real() * cs + d.imag() * sn; // Re(conj(u) d)
            const double chord = -b + std::sqrt(b * b - polypair::abs2(d) + r2);
            acc += Complex{cs, -sn} * chord;
        }
        return -f * acc * (2.0 * std::numbers::pi / static_cast<double>(m_theta));
    }
    std::vector<double> gx, gw;
    gauss_legendre(128, gx, gw);
    Complex acc{0.0, 0.0};
    const std::size_t m_ang = 1024;
    for (std::size_t j = 0; j < gx.size(); ++j) {
        const double r = 0.5 * radius * (gx[j] + 1.0);
        const double wr = 0.5 * radius * gw[j];
        Complex ring{0.0, 0.0};
        for (std::size_t k = 0; k < m_ang; ++k) {
            const double t =
                2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m_ang);
            ring += 1.0 / (d - r * Complex{std::cos(t), std::sin(t)});
        }
        acc += wr * r * ring * (2.0 * std::numbers::pi / static_cast<double>(m_ang));
    }
    return f * acc;
}

/// Cauchy transform of the two-disk measure (mass 1/2 on each of B(-2,1)
/// and B(+2,1)): sum of two disk quadratures.
inline Complex stieltjes_two_disks_quad(Complex z) {
    return 0.5 * stieltjes_disk_quad({-2.0, 0.0}, 1.0, z) +
           0.5 * stieltjes_disk_quad({2.0, 0.0}, 1.0, z);
}

/// Cauchy transform of the standard complex Gaussian (density
/// exp(-|x|^2)/pi) by the same ray substitution: the angular integrand is the
/// radial Gauss-Legendre integral of the density along the ray, smooth and
/// periodic in theta.
inline Complex stieltjes_gaussian_quad(Complex z, std::size_t m_theta = 512) {
    static std::vector<double> gx, gw;
    if (gx.empty()) gauss_legendre(160, gx, gw);
    const double s_max = std::abs(z) + 9.0;
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < m_theta; ++k) {
        const double th =
            2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m_theta);
        const double cs = std::cos(th), sn = std::sin(th);
        double radial = 0.0;
        for (std::size_t j = 0; j < gx.size(); ++j) {
            const double s = 0.5 * s_max * (gx[j] + 1.0);
            const double ws = 0.5 * s_max * gw[j];
            const Complex x = z + s * Complex{cs, sn};
            radial += ws * std::exp(-polypair::abs2(x)) / std::numbers::pi;
        }
        acc += Complex{cs, -sn} * radial;
    }
    return -acc * (2.0 * std::numbers::pi / static_cast<double>(m_theta));
}

/// Cauchy transform of the uniform measure on the unit circle: direct
/// trapezoid rule on the parametrized contour (spectral off |z| = 1).
inline Complex stieltjes_unit_circle_quad(Complex z, std::size_t m = 4096) {
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < m; ++k) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
        acc += 1.0 / (z - Complex{std::cos(t), std::sin(t)});
    }
    return acc / static_cast<double>(m);
}

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

/// Five-point-stencil Laplacian of a real-valued function on C.
template <typename F>
double laplacian_fd(F&& f, Complex z, double h) {
    return (f(z + Complex{h, 0.0}) + f(z - Complex{h, 0.0}) + f(z + Complex{0.0, h}) +
            f(z - Complex{0.0, h}) - 4.0 * f(z)) /
           (h * h);
}

/// Least-squares slope of y against x.
inline double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace oracle
