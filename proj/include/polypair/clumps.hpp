#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "polypair/complex.hpp"
#include "polypair/critical.hpp"
#include "polypair/errors.hpp"
#include "polypair/measures.hpp"
#include "polypair/polynomial.hpp"

namespace polypair {

/// Ball radius of the clump construction at a point x:
///   r = (ln n)^3 / (n * max{ |m_mu(x)|, (ln n)^4 / sqrt(n) })
/// The floor term keeps the radius finite and positive even where the Cauchy
/// transform vanishes.  Points where the transform is undefined (support
/// boundary, empirical atoms) conservatively use the floor branch.
inline double clump_radius(const Measure& mu, Complex x, std::size_t n) {
    if (n < 8) throw ArgumentError("clump_radius: need n >= 8");
    double abs_m = 0.0;
    try {
        abs_m = std::abs(stieltjes(mu, x));
    } catch (const Error&) {
        abs_m = 0.0;
    }
    const double nd = static_cast<double>(n);
    const double logn = std::log(nd);
    const double floor_term = std::pow(logn, 4.0) / std::sqrt(nd);
    return std::pow(logn, 3.0) / (nd * std::max(abs_m, floor_term));
}

/// Margin, in units of a ball's own radius, within which an unassigned
/// critical point (or a neighboring component) counts as adjacent to that
/// ball when explaining a root/cp count mismatch.  The ball radius and the
/// root-to-cp pairing distance shrink at comparable rates, so a paired cp can
/// land just outside its root's ball; a factor-two annulus captures that
/// boundary effect without absorbing genuinely distant points.
inline constexpr double kAdjacencyMargin = 2.0;

/// One connected component of the union of root balls.
struct Clump {
    std::vector<std::size_t> root_indices; ///< ascending
    std::vector<std::size_t> cp_indices;   ///< ascending
    std::vector<double> radii;             ///< aligned with root_indices
    bool is_pair_eligible = false;         ///< every member root clears the threshold
    double diameter = 0.0; ///< max over member pairs of |X_i - X_j| + r_i + r_j
    /// Unassigned cps whose nearest ball (in units of its radius) belongs to
    /// this component and lies within kAdjacencyMargin radii.
    std::size_t adjacent_unassigned = 0;
    /// Set when #roots != #cps but the mismatch is attributable to the
    /// assignment boundary: on the deficit side, adjacent unassigned cps make
    /// up the missing count; on either side, a mismatched neighbor component
    /// within kAdjacencyMargin * (r_i + r_j) accounts for a migrated cp.
    bool count_flagged = false;
};

/// Partition of the roots into ball-union components, with critical points
/// attributed to the component whose ball contains them.  Carries enough
/// context (points, transform magnitudes, threshold) for count_report to be
/// self-contained.
struct ClumpSet {
    std::vector<Clump> components;             ///< ordered by smallest root index
    std::vector<std::size_t> unassigned_cps;   ///< cps outside every ball
    std::size_t n = 0;
    std::vector<Complex> root_points;
    std::vector<Complex> cp_points;
    std::vector<double> abs_m;          ///< |m_mu(X_i)| per root (0 when undefined)
    double pair_threshold = 0.0;        ///< eligibility threshold actually used
};

struct ClumpOptions {
    double radius_scale = 1.0; ///< multiplies every ball radius (monotonicity probes)
    /// Pair-eligibility threshold on |m_mu(X_i)|; defaults to (ln n)^4/sqrt(n).
    /// At desk-scale n that default exceeds every |m_mu| for compact measures,
    /// leaving no eligible root, so harnesses may override it explicitly.
    std::optional<double> pair_threshold;
};

namespace detail {

struct UnionFind {
    std::vector<std::size_t> parent;
    std::vector<std::size_t> size;
    explicit UnionFind(std::size_t n) : parent(n), size(n, 1) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
    }
};

/// Uniform grid over the plane with cells of side `cell`; buckets hold point
/// indices.  Neighbor queries scan the 3x3 cell block, which covers every
/// pair within distance `cell`.
struct PointGrid {
    double cell;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;

    static std::uint64_t key(std::int64_t ix, std::int64_t iy) {
        return (static_cast<std::uint64_t>(ix) << 32) ^
               (static_cast<std::uint64_t>(iy) & 0xFFFFFFFFULL);
    }
    std::int64_t coord(double v) const {
        return static_cast<std::int64_t>(std::floor(v / cell));
    }
    void insert(std::size_t idx, Complex p) {
        buckets[key(coord(p.real()), coord(p.imag()))].push_back(idx);
    }
    template <typename F>
    void for_neighbors(Complex p, F&& f) const {
        const std::int64_t cx = coord(p.real());
        const std::int64_t cy = coord(p.imag());
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                const auto it = buckets.find(key(cx + dx, cy + dy));
                if (it == buckets.end()) continue;
                for (const std::size_t idx : it->second) f(idx);
            }
        }
    }
};

} // namespace detail

/// Builds the clump partition: union-find over ball intersections
/// |X_i - X_j| < r_i + r_j (grid-pruned), critical points assigned to the
/// component of a containing ball (ties to the nearest ball center, then the
/// lowest root index), the rest left unassigned.  The partition is invariant
/// under root reordering; component and member lists are canonicalized by
/// index.
inline ClumpSet build(const RootSet& roots, const CriticalSet& cps, const Measure& mu,
                      const ClumpOptions& opts = {}) {
    const std::size_t n = roots.points.size();
    if (n < 8) throw ArgumentError("clumps: need n >= 8");
    if (!(opts.radius_scale > 0.0))
        throw ArgumentError("clumps: radius_scale must be positive");

    ClumpSet out;
    out.n = n;
    out.root_points = roots.points;
    out.cp_points = cps.points;

    const double nd = static_cast<double>(n);
    const double logn = std::log(nd);
    out.pair_threshold =
        opts.pair_threshold.value_or(std::pow(logn, 4.0) / std::sqrt(nd));

    std::vector<double> radius(n);
    out.abs_m.resize(n);
    double max_r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        radius[i] = opts.radius_scale * clump_radius(mu, roots.points[i], n);
        try {
            out.abs_m[i] = std::abs(stieltjes(mu, roots.points[i]));
        } catch (const Error&) {
            out.abs_m[i] = 0.0;
        }
        max_r = std::max(max_r, radius[i]);
    }

    detail::PointGrid grid{2.0 * max_r, {}};
    for (std::size_t i = 0; i < n; ++i) grid.insert(i, roots.points[i]);

    detail::UnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i) {
        grid.for_neighbors(roots.points[i], [&](std::size_t j) {
            if (j <= i) return;
            const double rr = radius[i] + radius[j];
            if (abs2(roots.points[i] - roots.points[j]) < rr * rr) uf.unite(i, j);
        });
    }

    // Canonical components: indexed by smallest member, ordered by it.
    std::unordered_map<std::size_t, std::size_t> comp_of_rep;
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t rep = uf.find(i);
        auto [it, inserted] = comp_of_rep.try_emplace(rep, members.size());
        if (inserted) members.emplace_back();
        members[it->second].push_back(i); // ascending since i ascends
    }
    std::sort(members.begin(), members.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    std::vector<std::size_t> comp_of_root(n);
    for (std::size_t c = 0; c < members.size(); ++c)
        for (const std::size_t i : members[c]) comp_of_root[i] = c;

    out.components.resize(members.size());
    for (std::size_t c = 0; c < members.size(); ++c) {
        Clump& cl = out.components[c];
        cl.root_indices = members[c];
        cl.radii.reserve(members[c].size());
        bool eligible = true;
        for (const std::size_t i : members[c]) {
            cl.radii.push_back(radius[i]);
            eligible = eligible && out.abs_m[i] > out.pair_threshold;
        }
        cl.is_pair_eligible = eligible;
        double diam = 0.0;
        for (std::size_t a = 0; a < members[c].size(); ++a) {
            for (std::size_t b = a; b < members[c].size(); ++b) {
                const std::size_t i = members[c][a], j = members[c][b];
                diam = std::max(diam, std::abs(roots.points[i] - roots.points[j]) +
                                          radius[i] + radius[j]);
            }
        }
        cl.diameter = diam;
    }

    // Attribute each critical point to the component of a containing ball.
    for (std::size_t k = 0; k < cps.points.size(); ++k) {
        const Complex w = cps.points[k];
        double best_d2 = std::numeric_limits<double>::infinity();
        std::size_t best_root = n; // sentinel: no containing ball
        grid.for_neighbors(w, [&](std::size_t i) {
            const double d2 = abs2(w - roots.points[i]);
            if (d2 < radius[i] * radius[i]) {
                if (d2 < best_d2 || (d2 == best_d2 && i < best_root)) {
                    best_d2 = d2;
                    best_root = i;
                }
            }
        });
        if (best_root == n)
            out.unassigned_cps.push_back(k);
        else
            out.components[comp_of_root[best_root]].cp_indices.push_back(k);
    }

    // Attribute each unassigned cp to the component of the nearest ball in
    // units of that ball's radius, provided it lies within kAdjacencyMargin
    // radii.  The grid cell is 2 * max_r, so the 3x3 neighbor scan covers the
    // full margin (kAdjacencyMargin * radius[i] <= 2 * max_r).
    for (const std::size_t k : out.unassigned_cps) {
        const Complex w = cps.points[k];
        double best_ratio = std::numeric_limits<double>::infinity();
        std::size_t best_root = n;
        grid.for_neighbors(w, [&](std::size_t i) {
            const double ratio = std::abs(w - roots.points[i]) / radius[i];
            if (ratio < best_ratio || (ratio == best_ratio && i < best_root)) {
                best_ratio = ratio;
                best_root = i;
            }
        });
        if (best_root < n && best_ratio <= kAdjacencyMargin)
            ++out.components[comp_of_root[best_root]].adjacent_unassigned;
    }

    // Flag count mismatches explained by the assignment boundary.  Mismatched
    // components are rare, so the pairwise adjacency scan over them is cheap.
    std::vector<std::size_t> mismatched;
    for (std::size_t c = 0; c < out.components.size(); ++c) {
        Clump& cl = out.components[c];
        if (cl.root_indices.size() == cl.cp_indices.size()) continue;
        mismatched.push_back(c);
        if (cl.cp_indices.size() < cl.root_indices.size() &&
            cl.cp_indices.size() + cl.adjacent_unassigned >= cl.root_indices.size())
            cl.count_flagged = true;
    }
    for (std::size_t a = 0; a < mismatched.size(); ++a) {
        for (std::size_t b = a + 1; b < mismatched.size(); ++b) {
            Clump& ca = out.components[mismatched[a]];
            Clump& cb = out.components[mismatched[b]];
            const bool da = ca.cp_indices.size() < ca.root_indices.size();
            const bool db = cb.cp_indices.size() < cb.root_indices.size();
            if (da == db) continue; // a migrated cp needs one side of each sign
            bool adjacent = false;
            for (std::size_t i = 0; i < ca.root_indices.size() && !adjacent; ++i) {
                for (std::size_t j = 0; j < cb.root_indices.size() && !adjacent; ++j) {
                    const double d = std::abs(roots.points[ca.root_indices[i]] -
                                              roots.points[cb.root_indices[j]]);
                    adjacent = d <= kAdjacencyMargin * (ca.radii[i] + cb.radii[j]);
                }
            }
            if (adjacent) {
                ca.count_flagged = true;
                cb.count_flagged = true;
            }
        }
    }
    return out;
}

/// Per-clump count comparison and the pairing-distance summary.
struct ClumpCount {
    std::size_t roots = 0;
    std::size_t cps = 0;
    bool matched = false;
    bool is_pair_eligible = false;
    double diameter = 0.0;
    bool flagged = false; ///< mismatch attributed to the assignment boundary
};

struct CountReport {
    std::vector<ClumpCount> per_clump;
    std::size_t eligible_clumps = 0;
    std::size_t eligible_matched = 0;
    /// Fraction of pair-eligible clumps with #roots == #cps (0 when none are
    /// eligible -- callers should check eligible_clumps).
    double matched_fraction = 0.0;
    /// Max over roots in pair-eligible clumps (that received at least one cp)
    /// of dist(root, nearest cp in clump) * n * |m_mu(X)| / (ln n)^4.
    double max_normalized_pair_dist = 0.0;
    std::vector<std::size_t> deficit_clumps; ///< indices with roots != cps
    /// Pair-eligible mismatched clumps whose miscount is not attributable to
    /// the assignment boundary (no adjacent unassigned cp or mismatched
    /// neighbor within kAdjacencyMargin).
    std::size_t unexplained_mismatches = 0;
};

inline CountReport count_report(const ClumpSet& clumps) {
    CountReport rep;
    rep.per_clump.reserve(clumps.components.size());
    const double nd = static_cast<double>(clumps.n);
    const double log4 = std::pow(std::log(std::max(nd, 2.0)), 4.0);
    for (std::size_t c = 0; c < clumps.components.size(); ++c) {
        const Clump& cl = clumps.components[c];
        ClumpCount cc;
        cc.roots = cl.root_indices.size();
        cc.cps = cl.cp_indices.size();
        cc.matched = cc.roots == cc.cps;
        cc.is_pair_eligible = cl.is_pair_eligible;
        cc.diameter = cl.diameter;
        cc.flagged = cl.count_flagged;
        rep.per_clump.push_back(cc);
        if (!cc.matched) rep.deficit_clumps.push_back(c);
        if (cl.is_pair_eligible) {
            ++rep.eligible_clumps;
            if (cc.matched) ++rep.eligible_matched;
            if (!cc.matched && !cl.count_flagged) ++rep.unexplained_mismatches;
            if (!cl.cp_indices.empty()) {
                for (const std::size_t i : cl.root_indices) {
                    double d2 = std::numeric_limits<double>::infinity();
                    for (const std::size_t k : cl.cp_indices)
                        d2 = std::min(d2, abs2(clumps.root_points[i] - clumps.cp_points[k]));
                    const double normalized =
                        std::sqrt(d2) * nd * clumps.abs_m[i] / log4;
                    rep.max_normalized_pair_dist =
                        std::max(rep.max_normalized_pair_dist, normalized);
                }
            }
        }
    }
    rep.matched_fraction =
        rep.eligible_clumps == 0
            ? 0.0
            : static_cast<double>(rep.eligible_matched) /
                  static_cast<double>(rep.eligible_clumps);
    return rep;
}

} // namespace polypair
