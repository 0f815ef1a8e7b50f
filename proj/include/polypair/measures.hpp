#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "polypair/complex.hpp"
#include "polypair/errors.hpp"
#include "polypair/rng.hpp"
#include "polypair/summation.hpp"

namespace polypair {

enum class MeasureKind {
    UniformDisk,     ///< uniform on B(center, radius)
    TwoDisks,        ///< uniform on B(-2,1) U B(+2,1), mass 1/2 each (fixed)
    ComplexGaussian, ///< standard complex normal, density exp(-|z|^2)/pi
    UnitCircle,      ///< uniform on |z| = 1 (singular)
    RadialCdf,       ///< radially symmetric, user-supplied radial CDF
    Empirical,       ///< uniform atoms on a finite point list
};

/// Known zeros of the Cauchy-Stieltjes transform m_mu; `complete` marks the
/// list as provably exhaustive.
struct ZeroSet {
    std::vector<Complex> zeros;
    bool complete = false;
};

/// A root distribution mu: density, sampler, closed-form Cauchy-Stieltjes
/// transform, and known transform zeros.  Immutable after construction and
/// safe to share read-only across threads; sampling takes the seed as input
/// and holds no state.
class Measure {
public:
    static Measure uniform_disk(Complex center, double radius) {
        if (!(radius > 0.0))
            throw ArgumentError("uniform_disk: radius must be strictly positive");
        require_finite(center, "uniform_disk center");
        Measure m(MeasureKind::UniformDisk);
        m.center_ = center;
        m.radius_ = radius;
        return m;
    }

    /// The fixed two-disk configuration: unit disks centered at -2 and +2.
    static Measure two_disks() { return Measure(MeasureKind::TwoDisks); }

    static Measure complex_gaussian() { return Measure(MeasureKind::ComplexGaussian); }

    static Measure unit_circle() { return Measure(MeasureKind::UnitCircle); }

    /// Radially symmetric measure about `center`.
    ///
    /// `cdf(r)` is P(|X - center| < r): nondecreasing with limit 1.
    /// `planar_density(r)` is the value of the planar density f(z) at
    /// |z - center| = r (NOT the radial pdf of |X|); pass an empty function
    /// for singular radial measures.
    static Measure radial_cdf(std::function<double(double)> cdf,
                              std::function<double(double)> planar_density,
                              Complex center) {
        if (!cdf) throw ArgumentError("radial_cdf: cdf function required");
        require_finite(center, "radial_cdf center");
        Measure m(MeasureKind::RadialCdf);
        m.center_ = center;
        m.cdf_ = std::move(cdf);
        m.planar_density_ = std::move(planar_density);
        return m;
    }

    static Measure empirical(std::vector<Complex> points) {
        if (points.empty())
            throw ArgumentError("empirical: point list must be nonempty");
        for (const auto& p : points) require_finite(p, "empirical atom");
        Measure m(MeasureKind::Empirical);
        m.atoms_ = std::move(points);
        return m;
    }

    MeasureKind kind() const noexcept { return kind_; }
    Complex center() const noexcept { return center_; }
    double radius() const noexcept { return radius_; }
    const std::vector<Complex>& atoms() const noexcept { return atoms_; }
    const std::function<double(double)>& radial_cdf_fn() const noexcept { return cdf_; }

    /// True when the measure has a planar density (every kind except the
    /// singular UnitCircle and Empirical).
    bool has_density() const noexcept {
        switch (kind_) {
            case MeasureKind::UnitCircle:
            case MeasureKind::Empirical: return false;
            case MeasureKind::RadialCdf: return static_cast<bool>(planar_density_);
            default: return true;
        }
    }

    /// Human-readable kind name (used in CLI records and error messages).
    std::string kind_name() const {
        switch (kind_) {
            case MeasureKind::UniformDisk: return "uniform-disk";
            case MeasureKind::TwoDisks: return "two-disks";
            case MeasureKind::ComplexGaussian: return "gaussian";
            case MeasureKind::UnitCircle: return "unit-circle";
            case MeasureKind::RadialCdf: return "radial-cdf";
            case MeasureKind::Empirical: return "empirical";
        }
        return "?";
    }

    friend Complex stieltjes(const Measure&, Complex);
    friend double density(const Measure&, Complex);
    friend std::vector<Complex> sample_points(const Measure&, std::size_t, std::uint64_t);
    friend ZeroSet zero_set(const Measure&);
    friend bool in_support(const Measure&, Complex);

private:
    explicit Measure(MeasureKind k) : kind_(k) {}

    MeasureKind kind_;
    Complex center_{0.0, 0.0};
    double radius_ = 1.0;
    std::function<double(double)> cdf_;
    std::function<double(double)> planar_density_;
    std::vector<Complex> atoms_;
};

/// Cauchy-Stieltjes transform m_mu(z) = integral of dmu(x)/(z - x).
///
/// Closed forms per kind:
///  - UniformDisk: conj(z - c)/R^2 inside (boundary uses the interior branch;
///    both branches agree there), 1/(z - c) outside.
///  - TwoDisks: 1/2*(conj(z -+ 2) + 1/(z +- 2)) inside either disk,
///    z/(z^2 - 4) outside both.
///  - Radially symmetric kinds: m_mu(z) = P(|X - c| < |z - c|)/(z - c),
///    and m_mu(c) = 0.
///  - Empirical: (1/n) * sum 1/(z - x_j); evaluation exactly at an atom is a
///    domain error (downstream code never needs the singular value).
inline Complex stieltjes(const Measure& mu, Complex z) {
    require_finite(z, "stieltjes query point");
    switch (mu.kind_) {
        case MeasureKind::UniformDisk: {
            const Complex w = z - mu.center_;
            const double R2 = mu.radius_ * mu.radius_;
            if (abs2(w) <= R2) return std::conj(w) / R2;
            return 1.0 / w;
        }
        case MeasureKind::TwoDisks: {
            const Complex l = z + 2.0, r = z - 2.0;
            if (abs2(l) <= 1.0) return 0.5 * (std::conj(l) + 1.0 / r);
            if (abs2(r) <= 1.0) return 0.5 * (std::conj(r) + 1.0 / l);
            return z / (z * z - 4.0);
        }
        case MeasureKind::ComplexGaussian: {
            if (z == Complex{0.0, 0.0}) return {0.0, 0.0};
            // P(|X| < r) = 1 - exp(-r^2) since |X|^2 ~ Exp(1).
            return -std::expm1(-abs2(z)) / z;
        }
        case MeasureKind::UnitCircle: {
            const double r = std::abs(z);
            if (r == 1.0)
                throw DomainError("stieltjes: UnitCircle transform is undefined on |z| = 1");
            if (r < 1.0) return {0.0, 0.0};
            return 1.0 / z;
        }
        case MeasureKind::RadialCdf: {
            const Complex w = z - mu.center_;
            if (w == Complex{0.0, 0.0}) return {0.0, 0.0};
            return mu.cdf_(std::abs(w)) / w;
        }
        case MeasureKind::Empirical: {
            const auto& xs = mu.atoms_;
            for (std::size_t j = 0; j < xs.size(); ++j)
                if (z == xs[j])
                    throw DomainError("stieltjes: evaluation at empirical atom " + std::to_string(j));
            const Complex s = pairwise_sum<Complex>(
                xs.size(), [&](std::size_t j) { return 1.0 / (z - xs[j]); });
            return s / static_cast<double>(xs.size());
        }
    }
    throw ArgumentError("stieltjes: unknown measure kind");
}

/// Planar density f(z) >= 0; integrates to 1 over the plane.
/// Boundary circles belong to the support (closed disks).
inline double density(const Measure& mu, Complex z) {
    require_finite(z, "density query point");
    constexpr double kPi = 3.141592653589793238462643383279502884;
    switch (mu.kind_) {
        case MeasureKind::UniformDisk: {
            const double R2 = mu.radius_ * mu.radius_;
            return abs2(z - mu.center_) <= R2 ? 1.0 / (kPi * R2) : 0.0;
        }
        case MeasureKind::TwoDisks:
            return (abs2(z + 2.0) <= 1.0 || abs2(z - 2.0) <= 1.0) ? 1.0 / (2.0 * kPi) : 0.0;
        case MeasureKind::ComplexGaussian:
            return std::exp(-abs2(z)) / kPi;
        case MeasureKind::RadialCdf:
            if (!mu.planar_density_)
                throw UnsupportedError("density: this RadialCdf measure is singular");
            return mu.planar_density_(std::abs(z - mu.center_));
        case MeasureKind::UnitCircle:
        case MeasureKind::Empirical:
            throw UnsupportedError("density: measure kind " + mu.kind_name() + " is singular");
    }
    throw ArgumentError("density: unknown measure kind");
}

/// True when z lies on the (closed) support of mu.  For RadialCdf the support
/// is not computable from the CDF alone; callers treat it as all of C.
inline bool in_support(const Measure& mu, Complex z) {
    switch (mu.kind_) {
        case MeasureKind::UniformDisk:
            return abs2(z - mu.center_) <= mu.radius_ * mu.radius_;
        case MeasureKind::TwoDisks:
            return abs2(z + 2.0) <= 1.0 || abs2(z - 2.0) <= 1.0;
        case MeasureKind::ComplexGaussian:
            return true;
        case MeasureKind::UnitCircle:
            return std::abs(std::abs(z) - 1.0) == 0.0;
        case MeasureKind::RadialCdf:
            return true;
        case MeasureKind::Empirical:
            for (const auto& a : mu.atoms_)
                if (a == z) return true;
            return false;
    }
    return true;
}

/// n iid draws from mu.  Deterministic given (mu, n, seed): point j consumes
/// a dedicated counter substream of the seed, so samples are reproducible
/// across platforms and the first k points of a size-n sample equal the
/// size-k sample.
inline std::vector<Complex> sample_points(const Measure& mu, std::size_t n, std::uint64_t seed) {
    if (n < 2) throw ArgumentError("sample: need n >= 2 draws");
    std::vector<Complex> out(n);
    constexpr double kTwoPi = 2.0 * 3.141592653589793238462643383279502884;
    for (std::size_t j = 0; j < n; ++j) {
        CounterRng rng(seed, j);
        switch (mu.kind_) {
            case MeasureKind::UniformDisk:
                out[j] = rng.uniform_disk(mu.center_, mu.radius_);
                break;
            case MeasureKind::TwoDisks: {
                const Complex c = (rng.next_u64() & 1u) ? Complex{2.0, 0.0} : Complex{-2.0, 0.0};
                out[j] = rng.uniform_disk(c, 1.0);
                break;
            }
            case MeasureKind::ComplexGaussian:
                out[j] = rng.complex_normal();
                break;
            case MeasureKind::UnitCircle:
                out[j] = rng.unit_circle();
                break;
            case MeasureKind::RadialCdf: {
                // Invert the radial CDF by doubling + bisection; ~90 steps
                // pins r to the last representable bit.
                const double u = rng.uniform01();
                double hi = 1.0;
                while (mu.cdf_(hi) < u && hi < 1e12) hi *= 2.0;
                double lo = 0.0;
                for (int it = 0; it < 90; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (mu.cdf_(mid) < u ? lo : hi) = mid;
                }
                const double t = kTwoPi * rng.uniform01();
                out[j] = mu.center_ + Complex{hi * std::cos(t), hi * std::sin(t)};
                break;
            }
            case MeasureKind::Empirical:
                out[j] = mu.atoms_[rng.uniform_index(mu.atoms_.size())];
                break;
        }
    }
    return out;
}

/// Known zeros of m_mu.  RadialCdf and Empirical lists are not provably
/// exhaustive, so their `complete` flag is false (Empirical reports no zeros
/// at all: there is no closed form).
inline ZeroSet zero_set(const Measure& mu) {
    switch (mu.kind_) {
        case MeasureKind::UniformDisk:
            return {{mu.center_}, true};
        case MeasureKind::TwoDisks: {
            const double s3 = std::sqrt(3.0);
            return {{Complex{-s3, 0.0}, Complex{0.0, 0.0}, Complex{s3, 0.0}}, true};
        }
        case MeasureKind::ComplexGaussian:
        case MeasureKind::UnitCircle:
            return {{Complex{0.0, 0.0}}, true};
        case MeasureKind::RadialCdf:
            return {{mu.center_}, false};
        case MeasureKind::Empirical:
            return {{}, false};
    }
    return {{}, false};
}

} // namespace polypair
