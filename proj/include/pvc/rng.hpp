#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace pvc {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed for one trial: mix64(mix64(master + G*(cell+1)) + G*(trial+1)) with G the 64-bit
/// golden-ratio constant. Any single trial can be replayed from these three numbers.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell,
                                    std::uint64_t trial) noexcept {
    constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
    return mix64(mix64(master + kGolden * (cell + 1)) + kGolden * (trial + 1));
}

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// Counter-based generator: Philox4x32-10 keyed by a 64-bit seed, with the 128-bit counter
/// split into a 64-bit stream id (high half) and a 64-bit block index (low half).
/// Distinct (seed, stream) pairs give independent sequences.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    std::uint64_t seed() const noexcept {
        return (static_cast<std::uint64_t>(key_[1]) << 32) | key_[0];
    }
    std::uint64_t stream() const noexcept { return stream_; }

    /// Generator over the same key with another stream id.
    Rng split(std::uint64_t stream) const noexcept { return Rng(seed(), stream); }

    result_type operator()() noexcept {
        if (buffered_ == 0) refill();
        --buffered_;
        return buffer_[buffered_];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t uniform_below(std::uint64_t bound) noexcept;

    bool bernoulli(double p) noexcept { return uniform01() < p; }

    /// Binomial(trials, p) by sequential CDF inversion; falls back to summing Bernoulli draws
    /// when the zero-success mass underflows.
    std::uint64_t binomial(std::uint64_t trials, double p) noexcept;

private:
    void refill() noexcept;

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    std::size_t buffered_ = 0;
};

}  // namespace pvc
