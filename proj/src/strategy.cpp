#include "matchsim/strategy.hpp"

#include <cmath>

namespace matchsim {

std::string_view to_string(StrategyKind kind) noexcept {
    switch (kind) {
        case StrategyKind::AcceptAll: return "accept-all";
        case StrategyKind::Reasonable: return "reasonable";
        case StrategyKind::ModifiedReasonable: return "modified";
    }
    return "?";
}

std::optional<StrategyKind> parse_strategy(std::string_view name) noexcept {
    if (name == "accept-all") return StrategyKind::AcceptAll;
    if (name == "reasonable") return StrategyKind::Reasonable;
    if (name == "modified") return StrategyKind::ModifiedReasonable;
    return std::nullopt;
}

double reasonable_threshold(AgentView self, Lifetime T) noexcept {
    const double t = static_cast<double>(T);
    return static_cast<double>(worth(self, T)) * (1.0 - 1.0 / std::sqrt(t) - self.age / t);
}

bool accepts(StrategyKind kind, AgentView self, AgentView partner, const StripPartition* part, Lifetime T) {
    switch (kind) {
        case StrategyKind::AcceptAll:
            return true;
        case StrategyKind::Reasonable:
            // ties accept
            return static_cast<double>(match_utility(self, partner, T)) >= reasonable_threshold(self, T);
        case StrategyKind::ModifiedReasonable:
            if (part == nullptr) throw InvalidParameter("modified strategy needs a strip partition");
            return part->flat_index(self) == part->flat_index(partner);
    }
    return false;
}

}  // namespace matchsim
