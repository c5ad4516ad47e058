// rng.hpp: Reproducible random streams.
//
// xoshiro256** (Blackman & Vigna) seeded through SplitMix64. Every Monte-Carlo
// sample owns an independent stream derived from (seed, sample index), so the
// draws of sample i never depend on how samples are distributed over threads.
// Uniform and normal variates are generated here rather than through <random>
// distributions, whose algorithms differ between standard libraries.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace decohere {

inline constexpr const char* kRngName = "xoshiro256** per-sample streams seeded by splitmix64(mix(seed) ^ mix(index))";

inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t x) noexcept { return splitmix64(x); }

class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& w : s_) {
            w = splitmix64(sm);
        }
    }

    // Stream for one sample; independent of the number of workers.
    static Xoshiro256 substream(std::uint64_t seed, std::uint64_t index) noexcept {
        return Xoshiro256(mix64(seed) ^ mix64(index ^ 0xD1B54A32D192ED03ULL));
    }

    std::uint64_t operator()() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via the Marsaglia polar method.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * factor;
        has_spare_ = true;
        return u * factor;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace decohere
