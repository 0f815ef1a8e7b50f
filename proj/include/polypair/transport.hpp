#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "polypair/complex.hpp"
#include "polypair/critical.hpp"
#include "polypair/errors.hpp"
#include "polypair/measures.hpp"
#include "polypair/polynomial.hpp"
#include "polypair/summation.hpp"

namespace polypair {

/// A bijective pairing between two equal-size point clouds and its transport
/// cost.  For uniform atomic measures, w1 = total_cost/n is exactly the
/// Wasserstein-1 distance when the pairing is min-cost.
struct PairingReport {
    std::vector<std::size_t> assignment; ///< source index -> target index
    std::vector<double> distances;       ///< per-source matched distance
    double total_cost = 0.0;
    double w1 = 0.0;        ///< total_cost / n
    bool augmented = false; ///< whether the target cloud carries the mean atom
};

/// Critical points plus one atom at the root mean Xbar, equalizing the two
/// empirical masses for transport (n-1 critical points -> n targets).
inline std::vector<Complex> augment(const CriticalSet& cps, const RootSet& roots) {
    std::vector<Complex> out = cps.points;
    out.push_back(roots.mean);
    return out;
}

namespace detail {

/// Square linear assignment by successive shortest augmenting paths with
/// dual variables (Jonker-Volgenant class, O(n^3) worst case, exact for
/// real-valued costs -- no epsilon scaling).  `cost` is row-major n x n;
/// fills col4row with the minimizing column per row.
inline void solve_lap(std::size_t n, const std::vector<double>& cost,
                      std::vector<int>& col4row) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n, 0.0), v(n, 0.0), shortest(n, 0.0);
    std::vector<int> path(n, -1), row4col(n, -1), remaining(n, 0);
    std::vector<char> sr(n, 0), sc(n, 0);
    col4row.assign(n, -1);

    for (std::size_t cur_row = 0; cur_row < n; ++cur_row) {
        std::fill(sr.begin(), sr.end(), 0);
        std::fill(sc.begin(), sc.end(), 0);
        std::fill(shortest.begin(), shortest.end(), inf);
        for (std::size_t it = 0; it < n; ++it) remaining[it] = static_cast<int>(it);
        std::size_t num_remaining = n;

        double min_val = 0.0;
        int i = static_cast<int>(cur_row);
        int sink = -1;
        while (sink == -1) {
            sr[static_cast<std::size_t>(i)] = 1;
            std::size_t index = 0;
            double lowest = inf;
            const double* row = cost.data() + static_cast<std::size_t>(i) * n;
            for (std::size_t it = 0; it < num_remaining; ++it) {
                const int j = remaining[it];
                const double r = min_val + row[j] - u[static_cast<std::size_t>(i)] - v[j];
                if (r < shortest[j]) {
                    path[j] = i;
                    shortest[j] = r;
                }
                // Prefer unassigned sinks on ties so paths terminate eagerly.
                if (shortest[j] < lowest ||
                    (shortest[j] == lowest && row4col[j] == -1)) {
                    lowest = shortest[j];
                    index = it;
                }
            }
            min_val = lowest;
            if (!(min_val < inf))
                throw ConditioningError("wasserstein1: assignment became infeasible "
                                        "(non-finite costs)");
            const int j = remaining[index];
            if (row4col[j] == -1)
                sink = j;
            else
                i = row4col[j];
            sc[j] = 1;
            remaining[index] = remaining[--num_remaining];
        }

        u[cur_row] += min_val;
        for (std::size_t k = 0; k < n; ++k) {
            if (sr[k] && k != cur_row)
                u[k] += min_val - shortest[static_cast<std::size_t>(col4row[k])];
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (sc[j]) v[j] -= min_val - shortest[j];
        }

        int j = sink;
        while (true) {
            const int pi = path[j];
            row4col[j] = pi;
            std::swap(col4row[static_cast<std::size_t>(pi)], j);
            if (pi == static_cast<int>(cur_row)) break;
        }
    }
}

} // namespace detail

/// Exact Wasserstein-1 distance between two equal-size uniform atomic
/// measures: min-cost perfect matching under Euclidean cost, divided by n.
/// Capped at n = 5000 (the cost matrix and the cubic algorithm are the
/// limit); beyond that use greedy_pair.
inline PairingReport wasserstein1(const std::vector<Complex>& a,
                                  const std::vector<Complex>& b) {
    if (a.size() != b.size())
        throw ArgumentError("wasserstein1: size mismatch (" + std::to_string(a.size()) +
                            " vs " + std::to_string(b.size()) + ")");
    const std::size_t n = a.size();
    if (n == 0) throw ArgumentError("wasserstein1: empty point sets");
    if (n > 5000)
        throw SizeError("wasserstein1: exact matching capped at n=5000; "
                        "use greedy_pair beyond the cap");

    std::vector<double> cost(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            cost[i * n + j] = std::abs(a[i] - b[j]);

    std::vector<int> col4row;
    detail::solve_lap(n, cost, col4row);

    PairingReport rep;
    rep.assignment.resize(n);
    rep.distances.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        rep.assignment[i] = static_cast<std::size_t>(col4row[i]);
        rep.distances[i] = cost[i * n + rep.assignment[i]];
    }
    rep.total_cost = compensated_sum(rep.distances);
    rep.w1 = rep.total_cost / static_cast<double>(n);
    return rep;
}

/// Mutually-nearest-first greedy matching: each round pairs every
/// (root, target) pair that are each other's nearest unmatched partner.
/// Deterministic tie-break by (distance, root index, target index); an upper
/// bound on the exact transport cost.
inline PairingReport greedy_pair(const RootSet& roots, const std::vector<Complex>& targets) {
    const auto& a = roots.points;
    const std::size_t n = a.size();
    if (targets.size() != n)
        throw ArgumentError("greedy_pair: size mismatch (" + std::to_string(n) + " vs " +
                            std::to_string(targets.size()) + ")");

    PairingReport rep;
    rep.assignment.assign(n, 0);
    rep.distances.assign(n, 0.0);
    std::vector<std::size_t> free_roots(n), free_targets(n);
    for (std::size_t i = 0; i < n; ++i) free_roots[i] = free_targets[i] = i;
    std::vector<std::size_t> nearest_t(n, 0), nearest_r(n, 0);

    while (!free_roots.empty()) {
        for (const std::size_t i : free_roots) {
            double best = std::numeric_limits<double>::infinity();
            for (const std::size_t t : free_targets) {
                const double d2 = abs2(a[i] - targets[t]);
                if (d2 < best) { // strict: ties keep the lowest target index
                    best = d2;
                    nearest_t[i] = t;
                }
            }
        }
        for (const std::size_t t : free_targets) {
            double best = std::numeric_limits<double>::infinity();
            for (const std::size_t i : free_roots) {
                const double d2 = abs2(a[i] - targets[t]);
                if (d2 < best) { // strict: ties keep the lowest root index
                    best = d2;
                    nearest_r[t] = i;
                }
            }
        }
        // The globally closest free pair is always mutual, so every round
        // matches at least one pair and the loop terminates.
        std::vector<std::size_t> still_r, still_t;
        still_r.reserve(free_roots.size());
        still_t.reserve(free_targets.size());
        for (const std::size_t t : free_targets) {
            if (nearest_t[nearest_r[t]] != t) still_t.push_back(t);
        }
        for (const std::size_t i : free_roots) {
            const std::size_t t = nearest_t[i];
            if (nearest_r[t] == i) {
                rep.assignment[i] = t;
                rep.distances[i] = std::abs(a[i] - targets[t]);
            } else {
                still_r.push_back(i);
            }
        }
        free_roots.swap(still_r);
        free_targets.swap(still_t);
    }
    rep.total_cost = compensated_sum(rep.distances);
    rep.w1 = rep.total_cost / static_cast<double>(n);
    return rep;
}

/// One (n, seed) cell of the transport scaling study.
struct ScalingCell {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double w1 = 0.0;
    double eta = 0.0;
    double normalized = 0.0; ///< n * w1 / (eta * (ln n)^9)
};

/// Per-n medians across seeds.
struct ScalingRow {
    std::size_t n = 0;
    double median_w1 = 0.0;
    double median_eta = 0.0;
    double n_w1_over_log = 0.0; ///< n * median(w1) / ln n
};

struct ScalingRecord {
    std::vector<ScalingCell> cells;
    std::vector<ScalingRow> rows;
};

/// Sample -> solve -> augment with the mean atom -> exact W1, per (n, seed)
/// cell, with per-n medians.  The normalized statistic n*w1/(eta*(ln n)^9)
/// stays bounded when the transport law holds.  Cells are independent, so
/// sweeps may be distributed externally; this routine itself is sequential
/// and deterministic.
inline ScalingRecord scaling_record(const Measure& mu, const std::vector<std::size_t>& n_list,
                                    const std::vector<std::uint64_t>& seeds,
                                    const SolveOptions& opts = {}) {
    if (seeds.empty()) throw ArgumentError("scaling_record: need at least one seed");
    ScalingRecord rec;
    for (const std::size_t n : n_list) {
        if (n < 8) throw ArgumentError("scaling_record: n must be >= 8");
        std::vector<double> w1s, etas;
        w1s.reserve(seeds.size());
        etas.reserve(seeds.size());
        for (const std::uint64_t seed : seeds) {
            const RootSet roots = make_root_set(sample_points(mu, n, seed));
            const CriticalSet cps = solve(roots, opts);
            const PairingReport rep = wasserstein1(roots.points, augment(cps, roots));
            const double logn = std::log(static_cast<double>(n));
            ScalingCell cell;
            cell.n = n;
            cell.seed = seed;
            cell.w1 = rep.w1;
            cell.eta = roots.eta;
            cell.normalized = static_cast<double>(n) * rep.w1 /
                              (roots.eta * std::pow(logn, 9.0));
            rec.cells.push_back(cell);
            w1s.push_back(rep.w1);
            etas.push_back(roots.eta);
        }
        ScalingRow row;
        row.n = n;
        row.median_w1 = median(w1s);
        row.median_eta = median(etas);
        row.n_w1_over_log = static_cast<double>(n) * row.median_w1 /
                            std::log(static_cast<double>(n));
        rec.rows.push_back(row);
    }
    return rec;
}

} // namespace polypair
