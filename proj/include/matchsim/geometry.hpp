#pragma once

// Strip partition of the value x age box.
//
// Agents live on the integer grid value in [T, 2T), age in [0, T). An
// unmatched agent keeps its value and ages by one per step, so it moves along
// a line of slope 2 in (value, age) coordinates. Every such line is labelled by
// its diagonal coordinate d = value - 2 * age, which drops by 2 per step.
//
// The box is cut by these lines into two families of strips:
//   - Type 1 strips touch the top edge (age 0). Strip i covers
//     d in [T + (i-1)w, T + iw), with w = floor(sqrt(T)). The rightmost strip
//     absorbs the leftover range up to d = 2T-1 when T is not a perfect square.
//   - Type 2 strips lie below them. Strip k covers d in [b_k, b_{k-1}) where
//     b_0 = T and b_k = b_{k-1} - 2 * height_k. Heights are w, w, 2w, 4w, ...
//     capped at T/2, with the last one clipped so the heights sum to T.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace matchsim {

class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using Lifetime = std::int32_t;

struct GridPoint {
    std::int32_t value = 0;
    std::int32_t age = 0;

    friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

bool in_box(GridPoint p, Lifetime T) noexcept;

/// value - 2 * age. Constant along an unmatched agent's trajectory up to -2 per step.
constexpr std::int32_t diag_coord(GridPoint p) noexcept { return p.value - 2 * p.age; }

/// value * (T - age): the most a partner could still get out of this agent.
constexpr std::int64_t worth(GridPoint p, Lifetime T) noexcept {
    return static_cast<std::int64_t>(p.value) * (T - p.age);
}

/// First d-value of the width-1 diagonal band that starts at value 3T/2 on the
/// top edge. The band is {d0, d0 + 1} so it catches both parities.
constexpr std::int32_t tracked_diagonal(Lifetime T) noexcept { return (3 * T) / 2; }

enum class StripKind : std::uint8_t { Type1, Type2 };

struct StripId {
    StripKind kind = StripKind::Type1;
    std::int32_t index = 1;  // 1-based within its kind

    friend bool operator==(const StripId&, const StripId&) = default;
};

std::string to_string(StripId id);

class StripPartition {
public:
    Lifetime lifetime() const noexcept { return lifetime_; }
    /// Type 1 strip width, floor(sqrt(T)).
    std::int32_t width() const noexcept { return width_; }
    std::int32_t type1_count() const noexcept { return width_; }
    std::int32_t type2_count() const noexcept { return static_cast<std::int32_t>(type2_heights_.size()); }
    std::int32_t strip_count() const noexcept { return type1_count() + type2_count(); }

    const std::vector<std::int32_t>& type2_heights() const noexcept { return type2_heights_; }
    /// b_0 > b_1 > ... > b_K; b_0 = T.
    const std::vector<std::int32_t>& diag_boundaries() const noexcept { return diag_boundaries_; }
    /// Left (included) diagonal edge of each Type 1 strip, plus the right end 2T.
    std::vector<std::int32_t> type1_boundaries() const;

    /// Half-open diagonal range [lo, hi) covered by a strip.
    std::pair<std::int32_t, std::int32_t> diag_range(StripId id) const;

    StripId strip_of(GridPoint p) const;
    /// Same as strip_of but with a dense 0-based index: Type 1 strips first
    /// (0..w-1), then Type 2 strips (w..N-1).
    std::int32_t flat_index(GridPoint p) const;
    std::int32_t flat_index(StripId id) const noexcept;
    StripId from_flat(std::int32_t flat) const;

    /// Height of a Type 2 strip, or the vertical extent ceil(w/2) of a Type 1 strip.
    std::int32_t height(StripId id) const;

private:
    friend StripPartition build_partition(Lifetime T);

    std::int32_t flat_of_diag(std::int32_t d) const noexcept;

    Lifetime lifetime_ = 0;
    std::int32_t width_ = 0;
    std::vector<std::int32_t> type2_heights_;
    std::vector<std::int32_t> diag_boundaries_;
    // dense lookup: d - (2 - T) -> flat strip index
    std::vector<std::int32_t> diag_to_flat_;
};

/// Throws InvalidParameter for T < 4.
StripPartition build_partition(Lifetime T);

std::int32_t isqrt(std::int64_t x) noexcept;

}  // namespace matchsim
