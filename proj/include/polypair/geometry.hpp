#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "polypair/complex.hpp"

namespace polypair {

/// Convex hull (Andrew's monotone chain), counter-clockwise, no duplicate
/// endpoint.  Degenerate inputs (all collinear) yield a 1- or 2-point "hull".
inline std::vector<Complex> convex_hull(std::vector<Complex> pts) {
    std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n <= 2) return pts;
    auto cross = [](Complex o, Complex a, Complex b) {
        return (a.real() - o.real()) * (b.imag() - o.imag()) -
               (a.imag() - o.imag()) * (b.real() - o.real());
    };
    std::vector<Complex> h(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

/// Signed distance-style test: true when z lies inside the convex hull
/// inflated by `tol` (Gauss-Lucas membership check).
inline bool in_convex_hull(const std::vector<Complex>& hull, Complex z, double tol) {
    const std::size_t k = hull.size();
    if (k == 0) return false;
    if (k == 1) return std::abs(z - hull[0]) <= tol;
    auto seg_dist = [](Complex p, Complex a, Complex b) {
        const Complex ab = b - a;
        const double len2 = abs2(ab);
        double t = len2 > 0.0 ? ((p.real() - a.real()) * ab.real() +
                                 (p.imag() - a.imag()) * ab.imag()) / len2
                              : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        return std::abs(p - (a + t * ab));
    };
    if (k == 2) return seg_dist(z, hull[0], hull[1]) <= tol;
    bool inside = true;
    for (std::size_t i = 0; i < k; ++i) {
        const Complex a = hull[i], b = hull[(i + 1) % k];
        const double cr = (b.real() - a.real()) * (z.imag() - a.imag()) -
                          (b.imag() - a.imag()) * (z.real() - a.real());
        if (cr < 0.0) inside = false; // outside a CCW edge
    }
    if (inside) return true;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i)
        d = std::min(d, seg_dist(z, hull[i], hull[(i + 1) % k]));
    return d <= tol;
}

} // namespace polypair
