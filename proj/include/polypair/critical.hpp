#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "polypair/complex.hpp"
#include "polypair/errors.hpp"
#include "polypair/measures.hpp"
#include "polypair/polynomial.hpp"
#include "polypair/summation.hpp"

namespace polypair {

/// First-order predicted location of the critical point paired with root X_i:
///   w_hat = X_i - (1/n) * ((n-1) / sum_{j != i} 1/(X_i - X_j)).
///
/// Exact duplicates of X_i are skipped in the denominator (they carry no
/// 1/(X_i - X_j) information and would be poles).  `reliability` is the
/// empirical proxy |denom|/(n-1) for the Cauchy transform magnitude at X_i;
/// predictions degrade where the transform vanishes, signalled by `warning`.
struct PredictedCP {
    std::size_t root_index = 0;
    Complex w_hat{0.0, 0.0};
    Complex denom{0.0, 0.0}; ///< sum_{j != i, X_j != X_i} 1/(X_i - X_j)
    double reliability = 0.0; ///< |denom|/(n-1)
    bool warning = false;     ///< |denom| < 1e-14*(n-1): prediction unreliable
};

inline PredictedCP predict(const RootSet& roots, std::size_t i) {
    const auto& x = roots.points;
    const std::size_t n = x.size();
    if (i >= n)
        throw ArgumentError("predict: root index " + std::to_string(i) +
                            " out of range for n=" + std::to_string(n));
    const Complex xi = x[i];
    const Complex denom = pairwise_sum<Complex>(n, [&](std::size_t j) {
        if (j == i || x[j] == xi) return Complex{0.0, 0.0};
        return detail::robust_inv(xi - x[j]);
    });
    PredictedCP p;
    p.root_index = i;
    p.denom = denom;
    const double nd = static_cast<double>(n);
    p.reliability = std::abs(denom) / (nd - 1.0);
    p.warning = std::abs(denom) < 1e-14 * (nd - 1.0);
    p.w_hat = (denom == Complex{0.0, 0.0})
                  ? xi // no information: fall back to the root itself
                  : xi - ((nd - 1.0) / nd) * detail::robust_inv(denom);
    return p;
}

/// All n-1 critical points of prod (z - X_j).  Multiplicity-forced points
/// (a k-fold root contributes k-1 critical points at itself) come first in
/// atom order with residual 0 by convention; iterated points follow.
struct CriticalSet {
    std::vector<Complex> points;
    std::vector<double> residuals; ///< |S1(w_j)| at convergence
    int iterations = 0;            ///< total Aberth sweeps (incl. verification)
};

struct SolveOptions {
    double tol_correction = 1e-13; ///< |correction| < tol * (1 + |w_j|)
    double tol_residual = 1e-11;   ///< |S1(w_j)| < tol * n / dist(w_j, roots)
    int max_iter = 200;
};

namespace detail {

// ---- exact-equality atom grouping -----------------------------------------

struct AtomKey {
    std::uint64_t re_bits;
    std::uint64_t im_bits;
    bool operator==(const AtomKey&) const = default;
};

struct AtomKeyHash {
    std::size_t operator()(const AtomKey& k) const noexcept {
        std::uint64_t h = k.re_bits * 0x9E3779B97F4A7C15ULL;
        h ^= k.im_bits + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        h *= 0xBF58476D1CE4E5B9ULL;
        return static_cast<std::size_t>(h ^ (h >> 31));
    }
};

inline AtomKey atom_key(Complex z) {
    // "+ 0.0" folds -0.0 onto +0.0 so the bitwise key agrees with operator==.
    return AtomKey{std::bit_cast<std::uint64_t>(z.real() + 0.0),
                   std::bit_cast<std::uint64_t>(z.imag() + 0.0)};
}

/// Distinct root positions in first-occurrence order, with multiplicities.
struct AtomGroups {
    std::vector<Complex> position;
    std::vector<double> multiplicity;
};

inline AtomGroups group_atoms(const std::vector<Complex>& pts) {
    AtomGroups g;
    std::unordered_map<AtomKey, std::size_t, AtomKeyHash> index;
    index.reserve(pts.size() * 2);
    for (const Complex& z : pts) {
        auto [it, inserted] = index.try_emplace(atom_key(z), g.position.size());
        if (inserted) {
            g.position.push_back(z);
            g.multiplicity.push_back(0.0);
        }
        g.multiplicity[it->second] += 1.0;
    }
    return g;
}

// ---- structure-of-arrays inner sums ----------------------------------------
//
// The solver's cost is dominated by sums of w/(z-x) and w/(z-x)^2 over
// thousands of points.  These helpers run four independent accumulator lanes
// over separate re/im arrays: the reduction shape is fixed by the element
// count alone (deterministic results) and the loop auto-vectorizes.

struct AtomSums {
    Complex s1{0.0, 0.0};    ///< sum w_a / (z - x_a)
    Complex s2{0.0, 0.0};    ///< sum w_a / (z - x_a)^2
    double min_a2 = std::numeric_limits<double>::infinity(); ///< min |z - x_a|^2
};

inline AtomSums atom_sums(const double* xr, const double* xi, const double* wt,
                          std::size_t d, double zr, double zi) {
    double s1r[4] = {0.0, 0.0, 0.0, 0.0}, s1i[4] = {0.0, 0.0, 0.0, 0.0};
    double s2r[4] = {0.0, 0.0, 0.0, 0.0}, s2i[4] = {0.0, 0.0, 0.0, 0.0};
    double ma[4];
    for (double& m : ma) m = std::numeric_limits<double>::infinity();
    std::size_t k = 0;
    for (; k + 4 <= d; k += 4) {
        for (int l = 0; l < 4; ++l) {
            const double dr = zr - xr[k + l];
            const double di = zi - xi[k + l];
            const double a2 = dr * dr + di * di;
            const double ia = 1.0 / a2;
            const double t = wt[k + l] * ia;
            const double u = t * ia;
            s1r[l] += dr * t;
            s1i[l] -= di * t;
            s2r[l] += u * (dr * dr - di * di);
            s2i[l] -= u * (2.0 * dr * di);
            ma[l] = std::min(ma[l], a2);
        }
    }
    for (; k < d; ++k) {
        const double dr = zr - xr[k];
        const double di = zi - xi[k];
        const double a2 = dr * dr + di * di;
        const double ia = 1.0 / a2;
        const double t = wt[k] * ia;
        const double u = t * ia;
        s1r[0] += dr * t;
        s1i[0] -= di * t;
        s2r[0] += u * (dr * dr - di * di);
        s2i[0] -= u * (2.0 * dr * di);
        ma[0] = std::min(ma[0], a2);
    }
    AtomSums out;
    out.s1 = Complex{(s1r[0] + s1r[1]) + (s1r[2] + s1r[3]),
                     (s1i[0] + s1i[1]) + (s1i[2] + s1i[3])};
    out.s2 = Complex{(s2r[0] + s2r[1]) + (s2r[2] + s2r[3]),
                     (s2i[0] + s2i[1]) + (s2i[2] + s2i[3])};
    out.min_a2 = std::min(std::min(ma[0], ma[1]), std::min(ma[2], ma[3]));
    return out;
}

/// sum wt_k / (z - x_k) over [lo, hi); wt == nullptr means unit weights.
inline Complex weighted_s1_range(const double* xr, const double* xi, const double* wt,
                                 std::size_t lo, std::size_t hi, double zr, double zi) {
    double sr[4] = {0.0, 0.0, 0.0, 0.0}, si[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t k = lo;
    for (; k + 4 <= hi; k += 4) {
        for (int l = 0; l < 4; ++l) {
            const double dr = zr - xr[k + l];
            const double di = zi - xi[k + l];
            const double t = (wt ? wt[k + l] : 1.0) / (dr * dr + di * di);
            sr[l] += dr * t;
            si[l] -= di * t;
        }
    }
    for (; k < hi; ++k) {
        const double dr = zr - xr[k];
        const double di = zi - xi[k];
        const double t = (wt ? wt[k] : 1.0) / (dr * dr + di * di);
        sr[0] += dr * t;
        si[0] -= di * t;
    }
    return Complex{(sr[0] + sr[1]) + (sr[2] + sr[3]),
                   (si[0] + si[1]) + (si[2] + si[3])};
}

/// Perturbs later guesses so no two iterates (or iterate/root pairs) start at
/// bitwise-identical positions, which would blow up the repulsion term.
inline void separate_guesses(std::vector<Complex>& g,
                             const std::vector<Complex>& atom_pos, double scale) {
    std::unordered_map<AtomKey, int, AtomKeyHash> taken;
    taken.reserve(2 * (g.size() + atom_pos.size()));
    for (const Complex& a : atom_pos) taken.emplace(atom_key(a), 1);
    constexpr double kGolden = 0.6180339887498949;
    for (std::size_t j = 0; j < g.size(); ++j) {
        int attempt = 0;
        while (!taken.emplace(atom_key(g[j]), 1).second) {
            const double theta = 6.283185307179586 *
                std::fmod(kGolden * static_cast<double>(j + 1) * static_cast<double>(attempt + 1), 1.0);
            g[j] += 1e-9 * scale * static_cast<double>(attempt + 1) *
                    Complex{std::cos(theta), std::sin(theta)};
            ++attempt;
        }
    }
}

enum class AberthStatus { Converged, NanEvent, MaxIter };

struct AberthOutcome {
    AberthStatus status = AberthStatus::MaxIter;
    int sweeps = 0;
    double worst_residual = 0.0;
    std::size_t worst_index = 0; ///< within the iterated block
};

/// Synchronous (Jacobi) Aberth-Ehrlich sweeps over the free iterates.
/// Newton's ratio for p' is computed root-form as N = S1/(S1^2 - S2); the
/// Aberth correction N/(1 - N*R) is evaluated in the pole-tolerant single
/// division form S1/((S1^2 - S2) - S1*R).  A point latches once its residual
/// or correction criterion holds; a final verification sweep re-checks every
/// point simultaneously and reactivates any stragglers.
inline AberthOutcome run_aberth(const std::vector<double>& axr, const std::vector<double>& axi,
                                const std::vector<double>& awt, const std::vector<double>& fwt,
                                bool any_frozen, std::size_t n_total,
                                std::vector<double>& br, std::vector<double>& bi,
                                std::vector<double>& resid, const SolveOptions& opts) {
    const std::size_t d = axr.size();
    const std::size_t q = br.size();
    std::vector<double> nr(q), ni(q);
    std::vector<char> active(q, 1), conv(q, 0);
    std::size_t active_count = q;
    const double nd = static_cast<double>(n_total);

    AberthOutcome out;
    while (out.sweeps < opts.max_iter) {
        ++out.sweeps;
        const bool verification = (active_count == 0);
        bool nan_event = false;
        for (std::size_t j = 0; j < q; ++j) {
            if (!verification && !active[j]) {
                nr[j] = br[j];
                ni[j] = bi[j];
                continue;
            }
            const AtomSums as = atom_sums(axr.data(), axi.data(), awt.data(), d, br[j], bi[j]);
            if (!(as.min_a2 > 0.0) || !is_finite(as.s1) || !is_finite(as.s2)) {
                nan_event = true;
                break;
            }
            Complex repel = weighted_s1_range(br.data(), bi.data(), nullptr, 0, j, br[j], bi[j]) +
                            weighted_s1_range(br.data(), bi.data(), nullptr, j + 1, q, br[j], bi[j]);
            if (any_frozen)
                repel += weighted_s1_range(axr.data(), axi.data(), fwt.data(), 0, d, br[j], bi[j]);
            const Complex corr = as.s1 / ((as.s1 * as.s1 - as.s2) - as.s1 * repel);
            const Complex w_new = Complex{br[j], bi[j]} - corr;
            if (!is_finite(corr) || !is_finite(w_new)) {
                nan_event = true;
                break;
            }
            const double dist = std::sqrt(as.min_a2);
            const double res = std::abs(as.s1);
            resid[j] = res;
            const bool res_ok = res <= opts.tol_residual * nd / dist;
            const bool corr_ok = std::abs(corr) <= opts.tol_correction * (1.0 + std::abs(w_new));
            if (verification) {
                conv[j] = res_ok || corr_ok;
                nr[j] = br[j];
                ni[j] = bi[j];
            } else if (res_ok) {
                // Already at a zero of S1: freeze in place, do not overshoot.
                active[j] = 0;
                --active_count;
                nr[j] = br[j];
                ni[j] = bi[j];
            } else {
                nr[j] = w_new.real();
                ni[j] = w_new.imag();
                if (corr_ok) {
                    active[j] = 0;
                    --active_count;
                }
            }
        }
        if (nan_event) {
            out.status = AberthStatus::NanEvent;
            return out;
        }
        br.swap(nr);
        bi.swap(ni);
        if (verification) {
            bool all_ok = true;
            for (std::size_t j = 0; j < q; ++j) {
                if (!conv[j]) {
                    active[j] = 1;
                    ++active_count;
                    all_ok = false;
                }
            }
            if (all_ok) {
                out.status = AberthStatus::Converged;
                return out;
            }
        }
    }
    // Iteration budget exhausted: report the worst residual at the current state.
    out.status = AberthStatus::MaxIter;
    out.worst_residual = 0.0;
    for (std::size_t j = 0; j < q; ++j) {
        const AtomSums as = atom_sums(axr.data(), axi.data(), awt.data(), d, br[j], bi[j]);
        const double res = std::abs(as.s1);
        resid[j] = res;
        if (!(res <= out.worst_residual) || !std::isfinite(res)) {
            out.worst_residual = res;
            out.worst_index = j;
        }
    }
    return out;
}

} // namespace detail

/// Computes all n-1 critical points directly from the roots.
///
/// A k-fold root is a (k-1)-fold zero of p' and is emitted without iteration;
/// the remaining zeros are found by simultaneous Aberth-Ehrlich iteration
/// seeded with the per-atom first-order predictions (minus the least reliable
/// one: a degree-n polynomial has only n-1 critical points, and the discarded
/// prediction is the one closest to the Cauchy transform's zero set, where
/// no critical point pairs).  Deterministic given (roots, opts).
///
/// Throws ConvergenceError when opts.max_iter sweeps do not reach the
/// tolerance (after one deterministic perturbed restart on NaN/pole events).
inline CriticalSet solve(const RootSet& roots, const SolveOptions& opts = {}) {
    const std::size_t n = roots.points.size();
    if (n < 2) throw ArgumentError("solve: need at least two roots");
    if (opts.max_iter < 1) throw ArgumentError("solve: max_iter must be >= 1");
    if (!(opts.tol_correction > 0.0) || !(opts.tol_residual > 0.0))
        throw ArgumentError("solve: tolerances must be positive");

    const detail::AtomGroups atoms = detail::group_atoms(roots.points);
    const std::size_t d = atoms.position.size();
    const double scale = std::max(1.0, roots.eta);

    CriticalSet out;
    out.points.reserve(n - 1);
    out.residuals.reserve(n - 1);
    for (std::size_t a = 0; a < d; ++a) {
        for (double c = 1.0; c < atoms.multiplicity[a]; c += 1.0) {
            out.points.push_back(atoms.position[a]);
            out.residuals.push_back(0.0);
        }
    }
    if (d == 1) return out;

    // Warm starts: one prediction per distinct atom (duplicate-weighted),
    // computed with the same SoA kernel the sweeps use.
    std::vector<double> axr(d), axi(d), awt(d), fwt(d);
    bool any_frozen = false;
    for (std::size_t a = 0; a < d; ++a) {
        axr[a] = atoms.position[a].real();
        axi[a] = atoms.position[a].imag();
        awt[a] = atoms.multiplicity[a];
        fwt[a] = atoms.multiplicity[a] - 1.0;
        any_frozen = any_frozen || atoms.multiplicity[a] > 1.0;
    }
    const double nd = static_cast<double>(n);
    std::vector<Complex> pred(d);
    std::vector<double> rel(d);
    for (std::size_t a = 0; a < d; ++a) {
        const Complex denom =
            detail::weighted_s1_range(axr.data(), axi.data(), awt.data(), 0, a, axr[a], axi[a]) +
            detail::weighted_s1_range(axr.data(), axi.data(), awt.data(), a + 1, d, axr[a], axi[a]);
        rel[a] = std::abs(denom) / (nd - 1.0);
        pred[a] = (denom == Complex{0.0, 0.0} || !is_finite(denom))
                      ? atoms.position[a]
                      : atoms.position[a] - ((nd - 1.0) / nd) * detail::robust_inv(denom);
        if (!is_finite(pred[a])) pred[a] = atoms.position[a];
    }
    std::size_t drop = 0;
    for (std::size_t a = 1; a < d; ++a)
        if (rel[a] < rel[drop]) drop = a; // ties keep the lowest atom index

    std::vector<Complex> guess;
    guess.reserve(d - 1);
    for (std::size_t a = 0; a < d; ++a)
        if (a != drop) guess.push_back(pred[a]);
    detail::separate_guesses(guess, atoms.position, scale);

    const std::size_t q = d - 1;
    std::vector<double> br(q), bi(q), resid(q, 0.0);
    int total_sweeps = 0;
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::vector<Complex> start = guess;
        if (attempt == 1) {
            // Deterministic restart: spread the original guesses slightly.
            constexpr double kGolden = 0.6180339887498949;
            for (std::size_t j = 0; j < q; ++j) {
                const double theta = 6.283185307179586 *
                    std::fmod(kGolden * static_cast<double>(j + 1), 1.0);
                start[j] += 1e-3 * scale * Complex{std::cos(theta), std::sin(theta)};
            }
            detail::separate_guesses(start, atoms.position, scale);
        }
        for (std::size_t j = 0; j < q; ++j) {
            br[j] = start[j].real();
            bi[j] = start[j].imag();
        }
        const detail::AberthOutcome res = detail::run_aberth(
            axr, axi, awt, fwt, any_frozen, n, br, bi, resid, opts);
        total_sweeps += res.sweeps;
        if (res.status == detail::AberthStatus::Converged) {
            for (std::size_t j = 0; j < q; ++j) {
                out.points.push_back(Complex{br[j], bi[j]});
                out.residuals.push_back(resid[j]);
            }
            out.iterations = total_sweeps;
            return out;
        }
        if (res.status == detail::AberthStatus::MaxIter)
            throw ConvergenceError(
                "solve: Aberth iteration did not converge within " +
                    std::to_string(opts.max_iter) + " sweeps (worst residual " +
                    std::to_string(res.worst_residual) + ")",
                res.worst_residual, (n - d) + res.worst_index);
    }
    throw ConvergenceError("solve: NaN persisted after perturbed restart",
                           std::numeric_limits<double>::quiet_NaN(), 0);
}

/// Deterministic localization certificate: verified sufficient conditions for
/// exactly one critical point near a distinguished root.
///
/// With xi = X_{xi_index} and the other m = n-1 roots in the role of the
/// comparison configuration, the empirical anchor is s = (1/m) sum 1/(xi-X_j);
/// the certificate takes C1 = |s|/2, C2 = 2|s| (half/double heuristic), a
/// 16-point ring estimate of the Lipschitz constant of (1/m) sum 1/(z-X_j) on
/// |z - xi| <= 2/(C1 m) with a 1.5 safety factor, and C = 1.01 * 8(1+2 C2^2)/C1^3.
/// All conditions are then evaluated literally.  `valid` is sufficient, never
/// necessary: a failed certificate asserts nothing.
struct DetLocCertificate {
    Complex xi{0.0, 0.0};
    double c1 = 0.0;
    double c2 = 0.0;
    double k_lip = 0.0;
    double c_const = 0.0;
    bool cond_i = false;   ///< C1 <= |s| <= C2 with C1 > 0
    bool cond_ii = false;  ///< no pole inside the Lipschitz ring, finite estimate
    bool cond_iii = false; ///< min_j |xi - X_j| > 3/(C1 m)
    bool n_threshold_ok = false; ///< C > 8(1+2C2^2)/C1^3 and m > 4 C2 max{1/C1, C(k_lip+1)}
    Complex c_n{0.0, 0.0};       ///< predicted center (same formula as predict)
    double radius_small = 0.0;   ///< C (k_lip + 1) / m^2
    double radius_large = 0.0;   ///< 3 / (2 C1 m)
    bool valid = false;          ///< conjunction of the four flags
    std::optional<double> m_mu_abs; ///< |m_mu(xi)| when a measure was supplied (informational)
};

inline DetLocCertificate certify(const RootSet& roots, std::size_t xi_index,
                                 const Measure* measure = nullptr) {
    const auto& x = roots.points;
    const std::size_t n = x.size();
    if (n < 3) throw ArgumentError("certify: need at least three roots");
    if (xi_index >= n)
        throw ArgumentError("certify: root index " + std::to_string(xi_index) +
                            " out of range for n=" + std::to_string(n));
    const Complex xi = x[xi_index];
    const double m = static_cast<double>(n) - 1.0;
    const double inf = std::numeric_limits<double>::infinity();

    DetLocCertificate cert;
    cert.xi = xi;
    cert.c_n = predict(roots, xi_index).w_hat;
    if (measure != nullptr) {
        try {
            cert.m_mu_abs = std::abs(stieltjes(*measure, xi));
        } catch (const Error&) {
            cert.m_mu_abs.reset(); // transform undefined at xi (atom/boundary)
        }
    }

    // Exact duplicates of xi are poles of the anchor sum; they are skipped so
    // the remaining constants stay reportable, and they force cond_iii false
    // through min_dist = 0 (a flag, not an error).
    double min_dist2 = inf;
    const Complex s_raw = pairwise_sum<Complex>(n, [&](std::size_t j) {
        if (j == xi_index) return Complex{0.0, 0.0};
        min_dist2 = std::min(min_dist2, abs2(xi - x[j]));
        if (x[j] == xi) return Complex{0.0, 0.0};
        return detail::robust_inv(xi - x[j]);
    });
    const double min_dist = std::sqrt(min_dist2);
    const double s_abs = std::abs(s_raw) / m;
    if (!(s_abs > 0.0) || !std::isfinite(s_abs)) {
        cert.c_const = inf;
        cert.radius_small = inf;
        cert.radius_large = inf;
        return cert; // all flags false; nothing certifiable from a vanishing anchor
    }
    cert.c1 = 0.5 * s_abs;
    cert.c2 = 2.0 * s_abs;

    const double ring_radius = 2.0 / (cert.c1 * m);
    double ring_max = 0.0;
    for (int k = 0; k < 16; ++k) {
        const double theta = 6.283185307179586 * static_cast<double>(k) / 16.0;
        const Complex zk = xi + ring_radius * Complex{std::cos(theta), std::sin(theta)};
        const Complex s2 = pairwise_sum<Complex>(n, [&](std::size_t j) {
            if (j == xi_index) return Complex{0.0, 0.0};
            const Complex u = detail::robust_inv(zk - x[j]);
            return u * u;
        });
        ring_max = std::max(ring_max, std::abs(s2) / m);
    }
    cert.k_lip = 1.5 * ring_max;
    cert.c_const = 1.01 * 8.0 * (1.0 + 2.0 * cert.c2 * cert.c2) / (cert.c1 * cert.c1 * cert.c1);

    cert.cond_i = cert.c1 > 0.0 && cert.c1 <= s_abs && s_abs <= cert.c2;
    cert.cond_ii = min_dist > ring_radius && std::isfinite(cert.k_lip);
    cert.cond_iii = min_dist > 3.0 / (cert.c1 * m);
    cert.n_threshold_ok =
        cert.c_const > 8.0 * (1.0 + 2.0 * cert.c2 * cert.c2) / (cert.c1 * cert.c1 * cert.c1) &&
        m > 4.0 * cert.c2 * std::max(1.0 / cert.c1, cert.c_const * (cert.k_lip + 1.0));
    cert.radius_small = cert.c_const * (cert.k_lip + 1.0) / (m * m);
    cert.radius_large = 3.0 / (2.0 * cert.c1 * m);
    cert.valid = cert.cond_i && cert.cond_ii && cert.cond_iii && cert.n_threshold_ok;
    return cert;
}

/// Nearest critical point to root X_i; ties break to the lowest index.
/// `within_bound` compares the distance against 3/(|m_mu(X_i)| n) and is set
/// only when a measure is supplied and the transform is nonzero at X_i.
struct NearestCp {
    std::size_t cp_index = 0;
    double distance = 0.0;
    std::optional<bool> within_bound;
};

inline NearestCp nearest_cp(const RootSet& roots, const CriticalSet& cps, std::size_t i,
                            const Measure* measure = nullptr) {
    if (cps.points.empty()) throw ArgumentError("nearest_cp: critical set is empty");
    const std::size_t n = roots.points.size();
    if (i >= n)
        throw ArgumentError("nearest_cp: root index " + std::to_string(i) +
                            " out of range for n=" + std::to_string(n));
    const Complex xi = roots.points[i];
    NearestCp out;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cps.points.size(); ++k) {
        const double dist2 = abs2(xi - cps.points[k]);
        if (dist2 < best) {
            best = dist2;
            out.cp_index = k;
        }
    }
    out.distance = std::sqrt(best);
    if (measure != nullptr) {
        try {
            const double mv = std::abs(stieltjes(*measure, xi));
            if (mv > 0.0)
                out.within_bound = out.distance <= 3.0 / (mv * static_cast<double>(n));
        } catch (const Error&) {
            out.within_bound.reset(); // transform undefined at X_i
        }
    }
    return out;
}

} // namespace polypair
