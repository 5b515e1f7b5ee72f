#pragma once

#include <cmath>
#include <cstdint>

namespace gausscov {

namespace detail {

inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

// SplitMix64 output function (Steele, Lea, Flood 2014). Advances the state
// by the golden-ratio increment and returns a mixed value.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += golden_gamma);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace detail

/// xoshiro256++ (Blackman and Vigna, public domain reference code).
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed_key) {
        std::uint64_t sm = seed_key;
        for (auto& word : state_) word = detail::splitmix64_next(sm);
        // all-zero state is the one invalid seed
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0)
            state_[0] = detail::golden_gamma;
    }

    std::uint64_t next() {
        const std::uint64_t result = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl64(state_[3], 45);
        return result;
    }

private:
    std::uint64_t state_[4];
};

/// One independent draw stream, keyed by (seed, stream tag, index).
///
/// The key fully determines the stream, so a replication can be evaluated
/// on any worker, in any order, and still produce bit-identical draws.
/// Streams with distinct keys are non-overlapping for all practical
/// purposes (keys are hashed into the full 2^256 xoshiro state space).
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_tag, std::uint64_t index = 0)
        : gen_(derive_key(seed, stream_tag, index)) {}

    /// Uniform on the open interval (0, 1).
    double uniform01() {
        return (static_cast<double>(gen_.next() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via the Box-Muller transform. Pairs are generated
    /// together and the second value is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Student-t with 3 degrees of freedom: Z / sqrt(chi2_3 / 3).
    double student_t3() {
        const double z = normal();
        const double g1 = normal();
        const double g2 = normal();
        const double g3 = normal();
        return z / std::sqrt((g1 * g1 + g2 * g2 + g3 * g3) / 3.0);
    }

private:
    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream_tag,
                                    std::uint64_t index) {
        std::uint64_t h = seed;
        h = detail::splitmix64_next(h) ^ (stream_tag * 0xD1B54A32D192ED03ULL);
        h = detail::splitmix64_next(h) ^ (index * 0x8CB92BA72F3D8DD7ULL);
        return detail::splitmix64_next(h);
    }

    Xoshiro256pp gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace gausscov
