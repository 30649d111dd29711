#pragma once

// Loss accounting, censuses at the observation point, and the quantitative
// population/imbalance/loss bounds evaluated as run diagnostics.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matchsim/geometry.hpp"
#include "matchsim/market.hpp"

namespace matchsim {

/// Running loss totals under two denominators: every departure, and matched
/// departures only.
struct LossAccumulator {
    std::int64_t loss_all = 0;
    std::int64_t departures_all = 0;
    std::int64_t loss_matched = 0;
    std::int64_t departures_matched = 0;
    std::int64_t departures_aged_out = 0;

    void record(const DepartureRecord& rec) noexcept;
    void record(const MatchRecord& rec) noexcept;
    void record(const StepReport& report) noexcept;

    std::optional<double> avg_loss_all() const noexcept;
    std::optional<double> avg_loss_matched() const noexcept;
};

struct CensusRow {
    std::int64_t step = 0;
    StripId strip;
    std::int64_t men = 0;
    std::int64_t women = 0;
    std::int64_t imbalance = 0;

    std::int64_t population() const noexcept { return men + women; }
};

/// One row per strip, in flat-index order.
std::vector<CensusRow> strip_census(const MarketState& state, const StripPartition& part);

/// Agents whose diagonal coordinate is tracked_diagonal(T) or one above it.
std::int64_t diagonal_census(const MarketState& state, Lifetime T);

enum class BoundClause : std::uint8_t {
    TotalPopulation,      // <= 3/2 nN + n
    Type1Population,      // every Type 1 strip <= 2.6 n
    Type2Population,      // every Type 2 strip <= 7.5 n sqrt(T) / height
    BottomPopulation,     // bottommost Type 2 strip <= 60 n / sqrt(T)
    StripImbalance,       // every strip but the bottommost: |men - women| <= n / (25 sqrt(T))
    PopulationLowerBound  // total >= n sqrt(T) / 3
};
inline constexpr std::size_t kBoundClauseCount = 6;

std::string_view to_string(BoundClause clause) noexcept;
/// Every clause is an upper bound except PopulationLowerBound.
constexpr bool is_lower_bound(BoundClause c) noexcept { return c == BoundClause::PopulationLowerBound; }

struct BoundEntry {
    BoundClause clause = BoundClause::TotalPopulation;
    double threshold = 0.0;
    double observed = 0.0;
    double margin = 0.0;  // observed / threshold
    bool satisfied = true;
    std::optional<StripId> worst_strip;
};

struct BoundReport {
    std::vector<BoundEntry> entries;  // indexed by BoundClause

    const BoundEntry& at(BoundClause c) const { return entries.at(static_cast<std::size_t>(c)); }
};

/// For multi-strip clauses the entry describes the strip with the largest margin.
BoundReport hypothesis_report(const std::vector<CensusRow>& census, std::int64_t population, std::int64_t n,
                              const StripPartition& part);

/// Per-match loss bound: loss <= 4 T age + 2 T sqrt(T).
double match_loss_bound(std::int32_t age, Lifetime T) noexcept;
/// Weaker variant stated for a single match: loss <= 4 T age + 2 age sqrt(T).
/// Tracked for the record only.
double match_loss_bound_age_scaled(std::int32_t age, Lifetime T) noexcept;

struct SideCheck {
    bool man_ok = true;
    bool woman_ok = true;
    bool both() const noexcept { return man_ok && woman_ok; }
};
SideCheck match_loss_bound_check(const MatchRecord& rec, Lifetime T) noexcept;
SideCheck match_loss_bound_check_age_scaled(const MatchRecord& rec, Lifetime T) noexcept;

/// Parameter regime under which the high-probability upper bound is proven.
struct ConstraintCheck {
    bool c_ok = false;
    bool T_ok = false;
    bool n_ok = false;
    double c_rhs = 1.0;
    double T_rhs = 676.0;
    double n_rhs = 0.0;

    bool satisfied() const noexcept { return c_ok && T_ok && n_ok; }
};
ConstraintCheck constraints_satisfied(double n, double T, double c);

}  // namespace matchsim
