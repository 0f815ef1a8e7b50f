#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "polypair/complex.hpp"

namespace polypair {

/// Pairwise (binary-tree) summation with a fixed tree shape.
///
/// The reduction tree depends only on the element count, never on threading
/// or chunking, so results are bit-reproducible across runs and —
/// combined with the O(log n) error growth — stable to ~1e-15 relative under
/// input permutations.  `f(i)` produces the i-th term.
template <typename T, typename F>
T pairwise_sum(std::size_t n, F&& f) {
    // Base case: short runs are summed left-to-right.
    constexpr std::size_t kBase = 8;
    struct Rec {
        F& f;
        T run(std::size_t lo, std::size_t len) {
            if (len <= kBase) {
                T s{};
                for (std::size_t i = 0; i < len; ++i) s += f(lo + i);
                return s;
            }
            const std::size_t half = len / 2;
            return run(lo, half) + run(lo + half, len - half);
        }
    } rec{f};
    if (n == 0) return T{};
    return rec.run(0, n);
}

/// Median of a real sample (copy is sorted; even sizes average the middle
/// pair).  Empty input is a caller bug and returns NaN rather than throwing.
inline double median(std::vector<double> xs) {
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(xs.begin(), xs.end());
    const std::size_t mid = xs.size() / 2;
    if (xs.size() % 2 == 1) return xs[mid];
    return 0.5 * (xs[mid - 1] + xs[mid]);
}

/// Neumaier (improved Kahan) compensated sum of a real vector; exact to one
/// final rounding for well-scaled inputs.
inline double compensated_sum(const std::vector<double>& xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

} // namespace polypair
