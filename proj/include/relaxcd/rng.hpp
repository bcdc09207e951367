#pragma once

#include <cstdint>

namespace relaxcd {

/// SplitMix64 used as a counter-based generator: draw n of stream `key` is
/// mix64(key + n * golden_gamma). A stream is fully determined by its key, so
/// substreams are obtained by offsetting the key (seed + j).
class CounterRng {
public:
    static constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ull;

    explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

    static constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Key for an independent named stream derived from a seed.
    static constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) noexcept {
        return mix64(seed ^ mix64(tag + golden_gamma));
    }

    std::uint64_t next() noexcept { return mix64(key_ + (++counter_) * golden_gamma); }

    /// Uniform on [0, 1) with 53 random bits.
    double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * unit(); }

    /// Uniform integer in [0, bound) by multiply-shift.
    std::uint64_t below(std::uint64_t bound) noexcept {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

    [[nodiscard]] std::uint64_t key() const noexcept { return key_; }
    [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace relaxcd
