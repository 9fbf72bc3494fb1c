// rng.hpp — SplitMix64 generator with keyed substreams
//
// All stochastic studies draw from SplitMix64 (Steele, Lea & Vigna 2014).
// The mapping to doubles uses the top 53 bits, so draws are bit-identical
// across platforms and standard libraries. Substream k of a master seed is
// a fresh SplitMix64 whose initial state is the SplitMix64 finalizer applied
// to mix(seed) XOR mix(k); streams for different k are decorrelated and a
// run is reproducible regardless of how realizations are scheduled.

#pragma once

#include <cstdint>

namespace spincavity {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}
} // namespace detail

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        return detail::mix64(z);
    }

    // Uniform on [0, 1) with 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

inline SplitMix64 substream(std::uint64_t seed, std::uint64_t stream) {
    const std::uint64_t a = detail::mix64(seed + 0x9E3779B97F4A7C15ull);
    const std::uint64_t b = detail::mix64(stream + 0xD1B54A32D192ED03ull);
    return SplitMix64(detail::mix64(a ^ b));
}

} // namespace spincavity
