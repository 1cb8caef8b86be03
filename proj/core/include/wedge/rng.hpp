// Deterministic, stream-splittable random number generation.
//
// Monte Carlo work is partitioned into fixed-size chunks; chunk k of a run
// seeded with s draws from an independent substream derived only from
// (s, k), so results never depend on thread count or scheduling.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace wedge::rng {

// SplitMix64 (Steele, Lea & Flood). Used to derive generator states.
class SplitMix64 {
  public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept
        : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

// xoshiro256++ (Blackman & Vigna), state filled from SplitMix64.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed) noexcept {
        SplitMix64 sm(seed);
        for (auto& word : state_) word = sm.next();
    }

    // Substream `stream` of a base seed: the SplitMix64 seeding sequence
    // is started at an index derived from the stream number with a second
    // odd constant, so distinct streams never share seeding states.
    static Xoshiro256pp substream(std::uint64_t seed,
                                  std::uint64_t stream) noexcept {
        return Xoshiro256pp(seed + (stream + 1) * 0xD1342543DE82EF95ull);
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result =
            rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double strictly inside (0, 1), 53 usable bits.
    double uniform01() noexcept {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

// Standard normal variates via Box-Muller; consumes exactly two uniforms
// per pair, caching the second value.
class NormalSampler {
  public:
    explicit NormalSampler(Xoshiro256pp gen) noexcept : gen_(gen) {}

    double next() noexcept {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(gen_.uniform01()));
        const double angle = 2.0 * std::numbers::pi * gen_.uniform01();
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    Xoshiro256pp gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace wedge::rng
