#include "matchsim/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace matchsim {

std::int32_t isqrt(std::int64_t x) noexcept {
    if (x <= 0) return 0;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(x)));
    while (r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    return static_cast<std::int32_t>(r);
}

bool in_box(GridPoint p, Lifetime T) noexcept {
    return p.value >= T && p.value < 2 * T && p.age >= 0 && p.age < T;
}

std::string to_string(StripId id) {
    return (id.kind == StripKind::Type1 ? "type1#" : "type2#") + std::to_string(id.index);
}

StripPartition build_partition(Lifetime T) {
    if (T < 4) throw InvalidParameter("lifetime T must be >= 4, got " + std::to_string(T));

    StripPartition part;
    part.lifetime_ = T;
    part.width_ = isqrt(T);
    const std::int32_t w = part.width_;
    const std::int32_t cap = T / 2;

    std::int32_t total = 0;
    std::int32_t next = w;
    bool first = true;
    while (total < T) {
        std::int32_t h = std::min({next, cap, T - total});
        part.type2_heights_.push_back(h);
        total += h;
        if (first) {
            first = false;  // heights go w, w, 2w, 4w, ...
        } else {
            next = std::min<std::int64_t>(static_cast<std::int64_t>(next) * 2, cap);
        }
    }

    part.diag_boundaries_.push_back(T);
    for (std::int32_t h : part.type2_heights_)
        part.diag_boundaries_.push_back(part.diag_boundaries_.back() - 2 * h);

    // Reachable d runs from T - 2(T-1) = 2 - T up to 2T - 1.
    const std::int32_t d_min = 2 - T;
    const std::int32_t d_max = 2 * T - 1;
    part.diag_to_flat_.resize(static_cast<std::size_t>(d_max - d_min + 1));
    for (std::int32_t d = d_min; d <= d_max; ++d) {
        std::int32_t flat;
        if (d >= T) {
            flat = std::min((d - T) / w, w - 1);
        } else {
            std::int32_t k = 1;
            while (!(part.diag_boundaries_[k] <= d && d < part.diag_boundaries_[k - 1])) ++k;
            flat = w + k - 1;
        }
        part.diag_to_flat_[static_cast<std::size_t>(d - d_min)] = flat;
    }
    return part;
}

std::vector<std::int32_t> StripPartition::type1_boundaries() const {
    std::vector<std::int32_t> out;
    for (std::int32_t i = 0; i < width_; ++i) out.push_back(lifetime_ + i * width_);
    out.push_back(2 * lifetime_);
    return out;
}

std::pair<std::int32_t, std::int32_t> StripPartition::diag_range(StripId id) const {
    if (id.kind == StripKind::Type1) {
        if (id.index < 1 || id.index > width_) throw InvalidParameter("bad Type 1 strip index");
        const std::int32_t lo = lifetime_ + (id.index - 1) * width_;
        const std::int32_t hi = id.index == width_ ? 2 * lifetime_ : lo + width_;
        return {lo, hi};
    }
    if (id.index < 1 || id.index > type2_count()) throw InvalidParameter("bad Type 2 strip index");
    return {diag_boundaries_[id.index], diag_boundaries_[id.index - 1]};
}

std::int32_t StripPartition::flat_of_diag(std::int32_t d) const noexcept {
    return diag_to_flat_[static_cast<std::size_t>(d - (2 - lifetime_))];
}

std::int32_t StripPartition::flat_index(GridPoint p) const {
    if (!in_box(p, lifetime_))
        throw InvalidParameter("point (" + std::to_string(p.value) + "," + std::to_string(p.age) +
                               ") outside the box for T=" + std::to_string(lifetime_));
    return flat_of_diag(diag_coord(p));
}

std::int32_t StripPartition::flat_index(StripId id) const noexcept {
    return id.kind == StripKind::Type1 ? id.index - 1 : width_ + id.index - 1;
}

StripId StripPartition::from_flat(std::int32_t flat) const {
    if (flat < 0 || flat >= strip_count()) throw InvalidParameter("bad flat strip index");
    if (flat < width_) return {StripKind::Type1, flat + 1};
    return {StripKind::Type2, flat - width_ + 1};
}

StripId StripPartition::strip_of(GridPoint p) const { return from_flat(flat_index(p)); }

std::int32_t StripPartition::height(StripId id) const {
    if (id.kind == StripKind::Type1) return (width_ + 1) / 2;
    return type2_heights_.at(static_cast<std::size_t>(id.index - 1));
}

}  // namespace matchsim
