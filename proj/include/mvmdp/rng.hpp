#pragma once

#include <cstdint>

namespace mvmdp {

/// splitmix64 (Steele/Lea/Vigna): counter-based 64-bit generator. Small state,
/// cheap stream derivation, and the output sequence is pinned down by the
/// algorithm name alone, which keeps published results reproducible.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0,1) with 53 random mantissa bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Identifier reported alongside every stochastic result.
inline constexpr const char* kRngId = "splitmix64";

/// Deterministic substream for (seed, index): two finalizer rounds decorrelate
/// neighbouring indices before the stream starts.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (index * 0xD1B54A32D192ED03ull));
    const std::uint64_t first = mixer.next();
    return SplitMix64(first);
}

} // namespace mvmdp
