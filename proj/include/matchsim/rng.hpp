#pragma once

// Platform-stable random source for the market engine.
//
// SplitMix64 (Steele, Lea, Flood 2014): a 64-bit Weyl counter pushed through a
// fixed mixing permutation. Integer ranges and shuffles are implemented here
// rather than through <random> distributions, whose algorithms differ between
// standard libraries, so a seed reproduces bit-identical runs everywhere.

#include <cstdint>
#include <span>
#include <utility>

namespace matchsim {

__extension__ using u128 = unsigned __int128;

class SplitMix64 {
public:
    using result_type = std::uint64_t;

    SplitMix64() noexcept = default;
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, bound). bound must be > 0. Lemire's multiply-shift with
    /// rejection, so the result is exactly unbiased.
    std::uint64_t below(std::uint64_t bound) noexcept {
        u128 m = static_cast<u128>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<u128>((*this)()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool coin() noexcept { return ((*this)() >> 63) != 0; }

    std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

/// Fisher-Yates, back to front.
template <class T>
void shuffle(std::span<T> items, SplitMix64& rng) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        using std::swap;
        swap(items[i - 1], items[j]);
    }
}

}  // namespace matchsim
