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
#include "polypair/rng.hpp"
#include "polypair/summation.hpp"

namespace polypair {

// ---------------------------------------------------------------------------
// Test functions (C^2 cubic bump)
// ---------------------------------------------------------------------------

/// Compactly supported C^2 bump: phi(z) = amplitude * (1 - t)^3 with
/// t = |z - center|^2 / radius^2 on t <= 1, zero outside.  Value, gradient,
/// and Hessian all vanish at the support boundary, and the Laplacian has the
/// closed form  amplitude * (-12(1-t)^2 + 24 t (1-t)) / radius^2.
struct TestFunction {
    Complex center{0.0, 0.0};
    double radius = 1.0;
    double amplitude = 0.0;
};

inline TestFunction make_bump(Complex center, double radius, double amplitude) {
    require_finite(center, "bump center");
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw ArgumentError("bump: radius must be positive and finite");
    if (!std::isfinite(amplitude))
        throw ArgumentError("bump: amplitude must be finite");
    return TestFunction{center, radius, amplitude};
}

inline double phi_value(const TestFunction& phi, Complex z) {
    const double t = abs2(z - phi.center) / (phi.radius * phi.radius);
    if (t >= 1.0) return 0.0;
    const double s = 1.0 - t;
    return phi.amplitude * s * s * s;
}

inline double phi_laplacian(const TestFunction& phi, Complex z) {
    const double t = abs2(z - phi.center) / (phi.radius * phi.radius);
    if (t >= 1.0) return 0.0;
    const double s = 1.0 - t;
    return phi.amplitude * (-12.0 * s * s + 24.0 * t * s) / (phi.radius * phi.radius);
}

/// ||laplacian(phi)||_1 in closed form: (32 pi / 9) |amplitude|, independent
/// of radius (the radius cancels between the Laplacian scale and the area).
inline double phi_laplacian_l1(const TestFunction& phi) {
    return 32.0 * 3.141592653589793 / 9.0 * std::abs(phi.amplitude);
}

// ---------------------------------------------------------------------------
// Fluctuation sampling
// ---------------------------------------------------------------------------

enum class Regime { Inside, Outside };

/// One Monte Carlo draw of the scaled critical-point residual at xi:
///   value = scale * m_mu(xi)^2 * (w - c),  c = xi - 1/((n+1) m_mu(xi)),
/// with scale = n^{3/2}/sqrt(ln n) inside the support and n^{3/2} outside.
/// `flagged` records an event outside the law's conditioning: the located
/// critical point was farther than 3/(|m_mu(xi)| n) from xi, the local search
/// failed, or some root landed inside the exclusion radius
/// (ln n)^2/(n |m_mu(xi)|).  The last case is the root-collision event whose
/// probability vanishes asymptotically but not at desk scale; the summand
/// 1/(xi - X) is heavy-tailed, so the covariance of the limit law is only
/// estimable conditionally on that event's complement (the same device the
/// limit's derivation uses).
struct FluctuationSample {
    Complex value{0.0, 0.0};
    Regime regime = Regime::Inside;
    bool flagged = false;
};

namespace detail {

/// Newton iteration on S(z) = sum 1/(z - P_j) from a caller-supplied start.
/// S' = -S2, so the update is z <- z + S1/S2.  Convergence is checked before
/// the step is applied, so a start that is already a zero is returned intact.
/// Returns false (non-convergence) after max_steps or on non-finite values.
inline bool newton_s1_zero(const std::vector<double>& pr, const std::vector<double>& pi,
                           const std::vector<double>& ones, Complex& z, int max_steps = 60) {
    for (int step = 0; step < max_steps; ++step) {
        const AtomSums s =
            atom_sums(pr.data(), pi.data(), ones.data(), pr.size(), z.real(), z.imag());
        if (!(s.min_a2 > 0.0) || !is_finite(s.s1) || !is_finite(s.s2)) return false;
        const Complex delta = s.s1 / s.s2;
        if (!is_finite(delta)) return false;
        if (std::abs(delta) <= 1e-15 * (1.0 + std::abs(z))) return true;
        z += delta;
        if (!is_finite(z)) return false;
    }
    return false;
}

} // namespace detail

/// Samples n iid roots from mu, appends the deterministic root xi (total
/// degree n+1), locates the critical point paired with xi by a local Newton
/// search on S1 seeded at the first-order prediction, and returns the scaled
/// residual.  The pairing law puts a unique critical point within
/// 3/(|m_mu(xi)| n) of xi with overwhelming probability, which is exactly
/// the ball the flag checks, so a full simultaneous solve is not needed at
/// Monte Carlo scale.
inline FluctuationSample fluct_sample(const Measure& mu, Complex xi, std::size_t n,
                                      std::uint64_t seed, Regime regime) {
    require_finite(xi, "fluct_sample xi");
    if (n < 2) throw ArgumentError("fluct_sample: need n >= 2");
    const Complex m_mu = stieltjes(mu, xi);
    if (!(std::abs(m_mu) > 0.0))
        throw ArgumentError("fluct_sample: m_mu(xi) vanishes; the statistic is undefined");
    if (regime == Regime::Outside && in_support(mu, xi))
        throw ArgumentError("fluct_sample: outside regime requires xi off the support");

    const std::vector<Complex> sample = sample_points(mu, n, seed);
    const double nd = static_cast<double>(n);

    // Empirical transform at xi seeds the Newton search; the measure transform
    // centers the returned statistic.  Both shifts use the same expression so
    // the degenerate point-mass family cancels exactly.
    const Complex m_hat = pairwise_sum<Complex>(n, [&](std::size_t j) {
        return detail::robust_inv(xi - sample[j]);
    }) / nd;
    const Complex center = xi - detail::robust_inv((nd + 1.0) * m_mu);
    Complex z = xi - detail::robust_inv((nd + 1.0) * m_hat);
    if (!is_finite(z)) z = center;

    std::vector<double> pr(n + 1), pi(n + 1), ones(n + 1, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        pr[j] = sample[j].real();
        pi[j] = sample[j].imag();
    }
    pr[n] = xi.real();
    pi[n] = xi.imag();

    const bool converged = detail::newton_s1_zero(pr, pi, ones, z);

    FluctuationSample out;
    out.regime = regime;
    const double pair_radius = 3.0 / (std::abs(m_mu) * nd);
    const double logn = std::log(nd);
    const double exclusion = logn * logn / (nd * std::abs(m_mu));
    double min_dist2 = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j)
        min_dist2 = std::min(min_dist2, abs2(xi - sample[j]));
    out.flagged = !converged || std::abs(z - xi) > pair_radius ||
                  min_dist2 < exclusion * exclusion;
    const double scale = regime == Regime::Inside
                             ? std::pow(nd, 1.5) / std::sqrt(std::log(nd))
                             : std::pow(nd, 1.5);
    out.value = scale * m_mu * m_mu * (z - center);
    return out;
}

// ---------------------------------------------------------------------------
// Covariance targets and checks
// ---------------------------------------------------------------------------

/// Limit covariance of (Re, Im) of the scaled residual.  Inside the support
/// the closed form is (pi f(xi)/2, pi f(xi)/2, 0); outside it is the
/// covariance of 1/(xi - X), estimated by a fixed-seed Monte Carlo oracle
/// with standard errors.
struct CovTarget {
    double re_var = 0.0;
    double im_var = 0.0;
    double cross = 0.0;
    double re_se = 0.0; ///< standard errors (zero for the closed form)
    double im_se = 0.0;
    double cross_se = 0.0;
};

inline CovTarget cov_target(const Measure& mu, Complex xi, Regime regime) {
    require_finite(xi, "cov_target xi");
    CovTarget out;
    if (regime == Regime::Inside) {
        if (!mu.has_density())
            throw UnsupportedError("cov_target: inside regime needs a density");
        const double f = density(mu, xi);
        const double v = 3.141592653589793 * f / 2.0;
        out.re_var = v;
        out.im_var = v;
        out.cross = 0.0;
        return out;
    }
    if (in_support(mu, xi))
        throw ArgumentError("cov_target: outside regime requires xi off the support");

    // Fixed internal seed: the oracle is part of the artifact's contract and
    // must be reproducible run to run.
    constexpr std::uint64_t kOracleSeed = 0x0DDC0FFEEULL;
    constexpr std::size_t kDraws = 1000000;
    const std::vector<Complex> xs = sample_points(mu, kDraws, kOracleSeed);
    std::vector<double> re(kDraws), im(kDraws);
    for (std::size_t j = 0; j < kDraws; ++j) {
        const Complex u = detail::robust_inv(xi - xs[j]);
        re[j] = u.real();
        im[j] = u.imag();
    }
    const double m = static_cast<double>(kDraws);
    const double mean_re = compensated_sum(re) / m;
    const double mean_im = compensated_sum(im) / m;
    std::vector<double> dr2(kDraws), di2(kDraws), drdi(kDraws), dr4(kDraws), di4(kDraws),
        cross2(kDraws);
    for (std::size_t j = 0; j < kDraws; ++j) {
        const double a = re[j] - mean_re;
        const double b = im[j] - mean_im;
        dr2[j] = a * a;
        di2[j] = b * b;
        drdi[j] = a * b;
        dr4[j] = a * a * a * a;
        di4[j] = b * b * b * b;
        cross2[j] = a * a * b * b;
    }
    out.re_var = compensated_sum(dr2) / (m - 1.0);
    out.im_var = compensated_sum(di2) / (m - 1.0);
    out.cross = compensated_sum(drdi) / (m - 1.0);
    // Delta-method standard errors: se(var) = sqrt((m4 - var^2)/m).
    const double m4_re = compensated_sum(dr4) / m;
    const double m4_im = compensated_sum(di4) / m;
    const double m2_cross = compensated_sum(cross2) / m;
    out.re_se = std::sqrt(std::max(0.0, m4_re - out.re_var * out.re_var) / m);
    out.im_se = std::sqrt(std::max(0.0, m4_im - out.im_var * out.im_var) / m);
    out.cross_se = std::sqrt(std::max(0.0, m2_cross - out.cross * out.cross) / m);
    return out;
}

/// Tolerances for covariance_check.  With trace_rel_tol == 0 the variance
/// entries are compared relative to their own targets and the cross term
/// against an absolute bound; with trace_rel_tol > 0 every entry must sit
/// within trace_rel_tol * (re_var + im_var) of its target.
struct CovCheckOptions {
    double var_rel_tol = 0.30;
    double cross_abs_tol = 0.10;
    double trace_rel_tol = 0.0;
};

struct CovarianceReport {
    std::size_t used = 0; ///< unflagged samples entering the estimate
    double re_var = 0.0;
    double im_var = 0.0;
    double cross = 0.0;
    double re_se = 0.0; ///< jackknife standard errors
    double im_se = 0.0;
    double cross_se = 0.0;
    bool pass_re = false;
    bool pass_im = false;
    bool pass_cross = false;
    bool pass = false;         ///< conjunction at the supplied tolerances
    bool pass_3sigma = false;  ///< every entry within 3 jackknife SEs of target
};

namespace detail {

/// Jackknife standard error of the unbiased sample variance, from sufficient
/// statistics in O(m).
inline double jackknife_var_se(const std::vector<double>& x, double sum, double sumsq) {
    const double m = static_cast<double>(x.size());
    if (x.size() < 3) return 0.0;
    std::vector<double> loo(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double s = sum - x[i];
        const double q = sumsq - x[i] * x[i];
        loo[i] = (q - s * s / (m - 1.0)) / (m - 2.0);
    }
    const double mean_loo = compensated_sum(loo) / m;
    double ss = 0.0;
    for (const double v : loo) ss += (v - mean_loo) * (v - mean_loo);
    return std::sqrt((m - 1.0) / m * ss);
}

inline double jackknife_cov_se(const std::vector<double>& x, const std::vector<double>& y,
                               double sx, double sy, double sxy) {
    const double m = static_cast<double>(x.size());
    if (x.size() < 3) return 0.0;
    std::vector<double> loo(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double ax = sx - x[i];
        const double ay = sy - y[i];
        const double q = sxy - x[i] * y[i];
        loo[i] = (q - ax * ay / (m - 1.0)) / (m - 2.0);
    }
    const double mean_loo = compensated_sum(loo) / m;
    double ss = 0.0;
    for (const double v : loo) ss += (v - mean_loo) * (v - mean_loo);
    return std::sqrt((m - 1.0) / m * ss);
}

} // namespace detail

/// Sample covariance of (Re, Im) over the unflagged samples, with jackknife
/// standard errors and pass flags at the supplied tolerances.
inline CovarianceReport covariance_check(const std::vector<FluctuationSample>& samples,
                                         const CovTarget& target,
                                         const CovCheckOptions& opts = {}) {
    std::vector<double> re, im;
    re.reserve(samples.size());
    im.reserve(samples.size());
    for (const FluctuationSample& s : samples) {
        if (s.flagged) continue;
        re.push_back(s.value.real());
        im.push_back(s.value.imag());
    }
    if (re.size() < 100)
        throw InsufficientDataError("covariance_check: need >= 100 unflagged samples, have " +
                                    std::to_string(re.size()));
    const double m = static_cast<double>(re.size());
    const double sum_re = compensated_sum(re);
    const double sum_im = compensated_sum(im);
    const double mean_re = sum_re / m;
    const double mean_im = sum_im / m;
    std::vector<double> dr2(re.size()), di2(re.size()), drdi(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) {
        dr2[i] = (re[i] - mean_re) * (re[i] - mean_re);
        di2[i] = (im[i] - mean_im) * (im[i] - mean_im);
        drdi[i] = (re[i] - mean_re) * (im[i] - mean_im);
    }
    CovarianceReport rep;
    rep.used = re.size();
    rep.re_var = compensated_sum(dr2) / (m - 1.0);
    rep.im_var = compensated_sum(di2) / (m - 1.0);
    rep.cross = compensated_sum(drdi) / (m - 1.0);

    double sumsq_re = 0.0, sumsq_im = 0.0, sum_xy = 0.0;
    for (std::size_t i = 0; i < re.size(); ++i) {
        sumsq_re += re[i] * re[i];
        sumsq_im += im[i] * im[i];
        sum_xy += re[i] * im[i];
    }
    rep.re_se = detail::jackknife_var_se(re, sum_re, sumsq_re);
    rep.im_se = detail::jackknife_var_se(im, sum_im, sumsq_im);
    rep.cross_se = detail::jackknife_cov_se(re, im, sum_re, sum_im, sum_xy);

    if (opts.trace_rel_tol > 0.0) {
        const double band = opts.trace_rel_tol * (target.re_var + target.im_var);
        rep.pass_re = std::abs(rep.re_var - target.re_var) <= band;
        rep.pass_im = std::abs(rep.im_var - target.im_var) <= band;
        rep.pass_cross = std::abs(rep.cross - target.cross) <= band;
    } else {
        rep.pass_re = std::abs(rep.re_var - target.re_var) <=
                      opts.var_rel_tol * std::abs(target.re_var);
        rep.pass_im = std::abs(rep.im_var - target.im_var) <=
                      opts.var_rel_tol * std::abs(target.im_var);
        rep.pass_cross = std::abs(rep.cross) <= opts.cross_abs_tol;
    }
    rep.pass = rep.pass_re && rep.pass_im && rep.pass_cross;
    rep.pass_3sigma = std::abs(rep.re_var - target.re_var) <= 3.0 * rep.re_se &&
                      std::abs(rep.im_var - target.im_var) <= 3.0 * rep.im_se &&
                      std::abs(rep.cross - target.cross) <= 3.0 * rep.cross_se;
    return rep;
}

// ---------------------------------------------------------------------------
// Heavy-tailed truncated CLT
// ---------------------------------------------------------------------------

/// Per-component variance of the normalized linear statistic
///   v = (1/sqrt(n ln n)) sum_k t_k sum_j (1/(xi_k - X_j) - m_mu(xi_k))
/// across seeds, against the target sum_k pi |t_k|^2 f(xi_k) / 2.
/// The summand 1/(xi - X) has a log-divergent second moment, so each term is
/// truncated at |1/(xi_k - X_j)| < epsilon * sqrt(n ln n) — the same
/// truncation under which the limit covariance is derived; without it the
/// sample variance diverges (slowly) instead of converging to the target.
struct HeavyTailReport {
    double re_var = 0.0;
    double im_var = 0.0;
    double target = 0.0;
    double ratio_re = 0.0; ///< re_var / target (NaN when target == 0)
    double ratio_im = 0.0;
    std::size_t seeds_used = 0;
};

inline HeavyTailReport heavy_tail_variance(const Measure& mu, const std::vector<Complex>& xis,
                                           const std::vector<Complex>& t_weights, std::size_t n,
                                           const std::vector<std::uint64_t>& seeds,
                                           double epsilon = 0.5) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw ArgumentError("heavy_tail_variance: epsilon must be positive and finite");
    if (xis.empty() || xis.size() != t_weights.size())
        throw ArgumentError("heavy_tail_variance: xi and t weight lists must match and be nonempty");
    if (n < 8) throw ArgumentError("heavy_tail_variance: need n >= 8");
    if (seeds.size() < 2) throw ArgumentError("heavy_tail_variance: need >= 2 seeds");
    if (!mu.has_density())
        throw UnsupportedError("heavy_tail_variance: needs a density at the xi's");

    std::vector<Complex> ms(xis.size());
    double target_acc = 0.0;
    for (std::size_t k = 0; k < xis.size(); ++k) {
        require_finite(xis[k], "heavy_tail xi");
        require_finite(t_weights[k], "heavy_tail t");
        ms[k] = stieltjes(mu, xis[k]);
        target_acc += 3.141592653589793 * abs2(t_weights[k]) * density(mu, xis[k]) / 2.0;
    }

    const double nd = static_cast<double>(n);
    const double norm = 1.0 / std::sqrt(nd * std::log(nd));
    const double cutoff2 = epsilon * epsilon * nd * std::log(nd);
    std::vector<double> vre(seeds.size()), vim(seeds.size());
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        const std::vector<Complex> xs = sample_points(mu, n, seeds[s]);
        Complex acc{0.0, 0.0};
        for (std::size_t k = 0; k < xis.size(); ++k) {
            const Complex sum_k = pairwise_sum<Complex>(n, [&](std::size_t j) {
                const Complex u = detail::robust_inv(xis[k] - xs[j]);
                return (abs2(u) < cutoff2 ? u : Complex{0.0, 0.0}) - ms[k];
            });
            acc += t_weights[k] * sum_k;
        }
        vre[s] = norm * acc.real();
        vim[s] = norm * acc.imag();
    }
    const double m = static_cast<double>(seeds.size());
    const double mean_re = compensated_sum(vre) / m;
    const double mean_im = compensated_sum(vim) / m;
    double ss_re = 0.0, ss_im = 0.0;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        ss_re += (vre[s] - mean_re) * (vre[s] - mean_re);
        ss_im += (vim[s] - mean_im) * (vim[s] - mean_im);
    }
    HeavyTailReport rep;
    rep.re_var = ss_re / (m - 1.0);
    rep.im_var = ss_im / (m - 1.0);
    rep.target = target_acc;
    rep.ratio_re = rep.re_var / rep.target;
    rep.ratio_im = rep.im_var / rep.target;
    rep.seeds_used = seeds.size();
    return rep;
}

// ---------------------------------------------------------------------------
// Local law: linear-statistic gap and the log-potential identity
// ---------------------------------------------------------------------------

struct GapReport {
    double gap = 0.0;    ///< |sum phi(w_j) - sum phi(X_i)|
    double budget = 0.0; ///< ||laplacian(phi)||_1 * ln n
};

/// The local-law gap, degree mismatch included as-is (n roots vs n-1
/// critical points; the missing term is part of the measured quantity).
inline GapReport linear_statistic_gap(const RootSet& roots, const CriticalSet& cps,
                                      const TestFunction& phi) {
    GapReport rep;
    const double sum_roots = pairwise_sum<double>(
        roots.points.size(), [&](std::size_t j) { return phi_value(phi, roots.points[j]); });
    const double sum_cps = pairwise_sum<double>(
        cps.points.size(), [&](std::size_t j) { return phi_value(phi, cps.points[j]); });
    rep.gap = std::abs(sum_cps - sum_roots);
    rep.budget = phi_laplacian_l1(phi) * std::log(static_cast<double>(roots.points.size()));
    return rep;
}

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0; ///< Monte Carlo standard error of the estimate
};

/// Monte Carlo evaluation of the log-potential identity
///   sum_i phi(X_i) = (1/2pi) Int laplacian(phi)(z) log|p(z)| dA(z),
/// sampling uniformly on the support's bounding square inflated by 10%
/// (the integrand vanishes outside the support, so a tight box minimizes
/// variance).  A draw landing exactly on a root is resampled; the event has
/// probability zero and the redraw keeps the stream deterministic.
inline McEstimate mc_log_potential(const TestFunction& phi, const std::vector<Complex>& points,
                                   std::size_t m_samples, std::uint64_t seed) {
    if (points.empty()) throw ArgumentError("mc_log_potential: need at least one root");
    if (m_samples < 1000)
        throw ArgumentError("mc_log_potential: need m_samples >= 1000 for a usable stderr");
    const double half = 1.1 * phi.radius;
    const double area = (2.0 * half) * (2.0 * half);
    CounterRng rng(seed);
    std::vector<double> terms(m_samples);
    for (std::size_t l = 0; l < m_samples; ++l) {
        for (;;) {
            const Complex z = phi.center + Complex{rng.uniform(-half, half),
                                                   rng.uniform(-half, half)};
            const double lap = phi_laplacian(phi, z);
            if (lap == 0.0) {
                terms[l] = 0.0;
                break;
            }
            try {
                terms[l] = lap * log_abs_poly(points, z);
                break;
            } catch (const PoleError&) {
                continue; // probability-zero exact hit: redraw
            }
        }
    }
    const double m = static_cast<double>(m_samples);
    const double two_pi = 2.0 * 3.141592653589793;
    const double mean = compensated_sum(terms) / m;
    double ss = 0.0;
    for (const double t : terms) ss += (t - mean) * (t - mean);
    McEstimate est;
    est.estimate = area / two_pi * mean;
    est.stderr_ = area / two_pi * std::sqrt(ss / (m - 1.0) / m);
    return est;
}

// ---------------------------------------------------------------------------
// Companion/rank-one trace identity
// ---------------------------------------------------------------------------

/// Residual of the algebraic identity linking critical points to roots:
///   LHS = sum_j 1/(z - w_j) + 1/z         (trace over the n-1 critical
///                                          points and the extra 0 eigenvalue)
///   RHS = S1(z) - (1/n) (sum X_i/(z-X_i)^2) / ((z/n) S1(z)).
/// An O(n) independent check of the solver: both sides are computable without
/// ever forming the polynomial.  Throws PoleError when z sits on a root,
/// critical point, or 0, and ConditioningError when |(z/n) S1(z)| <= 1e-12.
inline double companion_trace_residual(const RootSet& roots, const CriticalSet& cps, Complex z) {
    require_finite(z, "companion_trace_residual z");
    if (abs2(z) == 0.0)
        throw PoleError("companion_trace_residual: z = 0 is an eigenvalue pole", 0);
    for (std::size_t j = 0; j < cps.points.size(); ++j) {
        if (abs2(z - cps.points[j]) == 0.0)
            throw PoleError("companion_trace_residual: z coincides with critical point " +
                                std::to_string(j),
                            j);
    }
    const LogDerivSums sums = log_deriv_sums(roots, z); // throws PoleError on a root
    const double nd = static_cast<double>(roots.points.size());
    const Complex denom = z / nd * sums.s1;
    if (std::abs(denom) <= 1e-12)
        throw ConditioningError("companion_trace_residual: (z/n) S1(z) is too small at this z");
    const Complex weighted = pairwise_sum<Complex>(roots.points.size(), [&](std::size_t i) {
        const Complex u = detail::robust_inv(z - roots.points[i]);
        return roots.points[i] * u * u;
    });
    const Complex rhs = sums.s1 - weighted / (nd * denom);
    const Complex lhs = pairwise_sum<Complex>(cps.points.size(), [&](std::size_t j) {
                            return detail::robust_inv(z - cps.points[j]);
                        }) +
                        detail::robust_inv(z);
    return std::abs(lhs - rhs);
}

} // namespace polypair
