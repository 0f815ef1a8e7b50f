#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "polypair/complex.hpp"

namespace polypair {

/// Counter-based pseudo-random generator: SplitMix64 in counter mode.
///
/// The j-th output is `mix64(key + j * GAMMA)` where `mix64` is the SplitMix64
/// finalizer (Steele, Lea & Flood 2014) and GAMMA is the 64-bit golden ratio.
/// Unlike the std::<random> engines + distributions, every draw is a pure
/// integer function of (seed, stream, counter), so streams are stable across
/// platforms, compilers and standard libraries, and arbitrary counters can be
/// addressed directly (splittable substreams).
///
/// Floating-point transforms (uniform, Box-Muller normals) are hand-written
/// below for the same reason: libstdc++/libc++ distributions are not
/// specified bit-for-bit.
class CounterRng {
public:
    /// One generator per (seed, stream) pair; streams are independent
    /// substreams of the same seed (used e.g. for "point j of the sample").
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(mix64(seed ^ 0x9E3779B97F4A7C15ull) ^ mix64(stream * 0xBF58476D1CE4E5B9ull + 0x94D049BB133111EBull)),
          counter_(0) {}

    /// Next raw 64-bit word.
    std::uint64_t next_u64() noexcept {
        return mix64(key_ + (counter_++) * 0x9E3779B97F4A7C15ull);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in (0, 1] (safe to feed to log).
    double uniform01_open0() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform 32-bit-bounded integer in [0, n) (Lemire-style rejection-free
    /// for our purposes: 64-bit multiply-shift; bias < 2^-32 is irrelevant
    /// for index choice but we keep the full 64-bit path for determinism).
    std::uint64_t uniform_index(std::uint64_t n) noexcept {
        // 128-bit multiply-high; deterministic and unbiased enough (bias
        // < n/2^64) for sampling indices.
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Standard complex normal: independent real/imaginary parts with
    /// variance 1/2 each, so E|Z|^2 = 1 and the density is exp(-|z|^2)/pi.
    /// Box-Muller with sigma^2 = 1/2 collapses to r = sqrt(-ln u).
    Complex complex_normal() noexcept {
        const double u = uniform01_open0();
        const double t = 2.0 * std::numbers::pi * uniform01();
        const double r = std::sqrt(-std::log(u));
        return {r * std::cos(t), r * std::sin(t)};
    }

    /// Uniform point on the disk B(center, radius) via polar inverse CDF:
    /// r = R*sqrt(u) (no rejection, fixed draw count).
    Complex uniform_disk(Complex center, double radius) noexcept {
        const double r = radius * std::sqrt(uniform01());
        const double t = 2.0 * std::numbers::pi * uniform01();
        return center + Complex{r * std::cos(t), r * std::sin(t)};
    }

    /// Uniform point on the unit circle |z| = 1.
    Complex unit_circle() noexcept {
        const double t = 2.0 * std::numbers::pi * uniform01();
        return {std::cos(t), std::sin(t)};
    }

private:
    static std::uint64_t mix64(std::uint64_t z) noexcept {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_;
};

} // namespace polypair
