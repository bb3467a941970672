#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

#include "cfswarm/errors.hpp"

namespace cfswarm {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Mix a master seed with an id path into a well-spread child seed.
/// Used to give every particle/iteration/query its own substream so results
/// do not depend on evaluation order or worker count.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
    std::uint64_t state = master ^ 0xD3F2A1C55B79E421ull;
    std::uint64_t acc = splitmix64_next(state);
    for (std::uint64_t id : path) {
        state ^= acc + 0x9E3779B97F4A7C15ull + (id << 1) + 1;
        acc = splitmix64_next(state);
    }
    return acc;
}

/// Stream ids for derive_seed paths; one per independent consumer.
namespace stream_id {
inline constexpr std::uint64_t kSplitShuffle = 1;
inline constexpr std::uint64_t kSynthRow = 2;
inline constexpr std::uint64_t kForestTree = 3;
inline constexpr std::uint64_t kSwarmInit = 4;
inline constexpr std::uint64_t kSwarmUpdate = 5;
inline constexpr std::uint64_t kKMeansSeed = 6;
inline constexpr std::uint64_t kClusterPick = 7;
inline constexpr std::uint64_t kGrowingSpheres = 8;
inline constexpr std::uint64_t kQuery = 9;
inline constexpr std::uint64_t kQuerySample = 10;
} // namespace stream_id

/// Deterministic xoshiro256++ stream. All randomness in the library flows
/// through this class, never through <random> distributions, so outputs are
/// identical across platforms, standard libraries and thread counts.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    static RngStream derive(std::uint64_t master,
                            std::initializer_list<std::uint64_t> path) {
        return RngStream(derive_seed(master, path));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi); degenerate interval returns lo.
    double uniform(double lo, double hi) {
        return lo + uniform() * (hi - lo);
    }

    /// Unbiased uniform index in [0, n).
    std::size_t uniform_index(std::size_t n) {
        if (n == 0) throw UsageError("uniform_index: n must be positive");
        const std::uint64_t bound = n;
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold) return static_cast<std::size_t>(x % bound);
        }
    }

    /// Standard normal via Box-Muller; pairs are cached.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
        cached_ = r * std::sin(theta);
        has_cached_ = true;
        return r * std::cos(theta);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
    bool has_cached_ = false;
    double cached_ = 0.0;
};

} // namespace cfswarm
