#pragma once

#include <cstdint>
#include <limits>

#include "shelby/rational.hpp"

namespace shelby {

/// Deterministic counter-based generator: a SplitMix64-style finalizer applied
/// to key + n * golden-ratio increments. Streams keyed by (seed, epoch,
/// phase) are independent, so every simulation phase draws from its own
/// replayable sequence regardless of how many values other phases consumed.
class CounterRng {
  public:
    enum class Phase : std::uint64_t {
        ChunkData = 1,
        Assign = 2,
        Responses = 3,
        Inspect = 4,
        ExtraAudits = 5,
        Generic = 6,
    };

    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0)
        : key_(mix(mix(mix(seed + kGolden) ^ stream) ^ substream)) {}

    CounterRng(std::uint64_t seed, std::uint64_t epoch, Phase phase)
        : CounterRng(seed, epoch, static_cast<std::uint64_t>(phase)) {}

    std::uint64_t next_u64() { return mix(key_ + ++counter_ * kGolden); }

    /// Unbiased uniform draw in [0, bound) by rejection.
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound <= 1) {
            next_u64();
            return 0;
        }
        const std::uint64_t limit =
            std::numeric_limits<std::uint64_t>::max() -
            std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t draw;
        do {
            draw = next_u64();
        } while (draw >= limit);
        return draw % bound;
    }

    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

  private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Precomputed Bernoulli threshold so per-event coin flips are a single u64
/// compare. floor(p * 2^64) biases each flip by at most 2^-64.
struct CoinThreshold {
    bool always = false;
    std::uint64_t value = 0;

    static CoinThreshold from(const Rational& p) {
        if (p >= 1) return {true, 0};
        if (p <= 0) return {false, 0};
        BigInt scaled = boost::multiprecision::numerator(p);
        scaled <<= 64;
        scaled /= boost::multiprecision::denominator(p);
        return {false, scaled.convert_to<std::uint64_t>()};
    }

    bool flip(CounterRng& rng) const {
        const std::uint64_t draw = rng.next_u64();
        return always || draw < value;
    }
};

}  // namespace shelby
