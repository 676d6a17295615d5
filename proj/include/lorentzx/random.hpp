#pragma once

#include <cstdint>
#include <vector>

namespace lorentzx {

/// Deterministic 64-bit generator (splitmix-style integer mixing).
/// Every family and experiment derives its randomness from this so that
/// identical seeds reproduce identical artifacts on any platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    /// Derive an independent stream (for per-member seeding).
    SplitMix64 fork() { return SplitMix64(next_u64()); }

private:
    std::uint64_t state_;
};

} // namespace lorentzx
