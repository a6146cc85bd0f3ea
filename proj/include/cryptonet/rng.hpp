#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace cryptonet {

// Counter-based random stream (SplitMix64 core). Each stream is keyed by
// (global_seed, src, dst, stat_kind) so that every pair in a sweep draws from
// its own reproducible sequence, independent of evaluation order and thread
// count.
class PairRng {
public:
    explicit PairRng(std::uint64_t seed) : state_(mix(seed)) {}

    PairRng(std::uint64_t global_seed, std::uint64_t src, std::uint64_t dst,
            std::uint64_t stat_kind)
        : state_(mix(mix(mix(mix(global_seed) ^ src) ^ dst) ^ stat_kind)) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Unbiased integer in [0, bound) via rejection sampling.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % bound;
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; exactly two draws per call.
    double next_normal() {
        // u1 in (0, 1] so the log is finite.
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    // In-place Fisher-Yates shuffle; every permutation equally likely.
    template <typename T>
    void shuffle(std::span<T> values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

} // namespace cryptonet
