#pragma once

// Acceptance rules. A population is homogeneous: every agent in a run uses the
// same StrategyKind.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "matchsim/geometry.hpp"

namespace matchsim {

enum class StrategyKind : std::uint8_t { AcceptAll, Reasonable, ModifiedReasonable };

/// CLI spelling: accept-all, reasonable, modified.
std::string_view to_string(StrategyKind kind) noexcept;
std::optional<StrategyKind> parse_strategy(std::string_view name) noexcept;

/// What an agent knows about itself or a proposed partner.
using AgentView = GridPoint;

/// Utility `self` derives from matching `partner`: partner value times the
/// shorter remaining lifetime of the two.
constexpr std::int64_t match_utility(AgentView self, AgentView partner, Lifetime T) noexcept {
    const std::int32_t older = self.age > partner.age ? self.age : partner.age;
    return static_cast<std::int64_t>(partner.value) * (T - older);
}

/// Shortfall against the value * T benchmark, clamped at zero.
constexpr std::int64_t match_loss(AgentView self, AgentView partner, Lifetime T) noexcept {
    const std::int64_t shortfall = static_cast<std::int64_t>(self.value) * T - match_utility(self, partner, T);
    return shortfall > 0 ? shortfall : 0;
}

/// Minimum utility a Reasonable agent accepts:
/// worth * (1 - 1/sqrt(T) - age/T), with real-valued sqrt(T).
double reasonable_threshold(AgentView self, Lifetime T) noexcept;

/// Whether `self` accepts `partner`. `part` is only consulted for
/// ModifiedReasonable and may be null otherwise.
bool accepts(StrategyKind kind, AgentView self, AgentView partner, const StripPartition* part, Lifetime T);

inline bool mutually_accept(StrategyKind kind, AgentView a, AgentView b, const StripPartition* part, Lifetime T) {
    return accepts(kind, a, b, part, T) && accepts(kind, b, a, part, T);
}

}  // namespace matchsim
