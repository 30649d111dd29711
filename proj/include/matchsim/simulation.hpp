#pragma once

// Driving a discrete market for a fixed horizon and summarising the run.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "matchsim/market.hpp"
#include "matchsim/metrics.hpp"

namespace matchsim {

struct SimulationConfig {
    std::int64_t n = 500;
    Lifetime T = 100;
    std::int64_t steps = 2000;
    StrategyKind strategy = StrategyKind::ModifiedReasonable;
    std::uint64_t seed = 0;
};

/// Per-step aggregates. Loss columns are cumulative from step 0.
struct TimeseriesRow {
    std::int64_t step = 0;
    std::int64_t population = 0;  // after entry
    std::int64_t men = 0;
    std::int64_t women = 0;
    std::int64_t entrants = 0;
    std::int64_t matches = 0;  // matched pairs this step
    std::int64_t aged_out = 0;
    std::int64_t cum_loss = 0;
    std::int64_t cum_departures = 0;
    std::int64_t cum_loss_matched = 0;
    std::int64_t cum_departures_matched = 0;
    std::int64_t diag_population = 0;
};

struct ClauseTally {
    std::int64_t observed_steps = 0;
    std::int64_t violations = 0;
    double worst_margin = 0.0;  // max observed/threshold (min for the lower bound)

    double satisfied_fraction() const noexcept {
        return observed_steps == 0 ? 1.0
                                   : 1.0 - static_cast<double>(violations) / static_cast<double>(observed_steps);
    }
};

struct RunSummary {
    double avg_population = 0.0;
    std::optional<double> avg_loss_all;
    std::optional<double> avg_loss_matched;
    std::optional<double> loss_over_T;          // avg_loss_all / T
    std::optional<double> loss_over_T_matched;  // avg_loss_matched / T
    double normalized_population = 0.0;         // avg_population / (n sqrt(T))
    std::optional<double> normalized_loss;      // avg_loss_all / (T sqrt(T))
    std::int64_t departures_matched = 0;
    std::int64_t departures_aged_out = 0;
    std::int64_t total_entrants = 0;
    std::int64_t final_pool = 0;

    // Only populated for the modified strategy (the bounds refer to its strips).
    std::array<ClauseTally, kBoundClauseCount> clauses{};
    std::int64_t matches_checked = 0;
    std::int64_t match_bound_violations = 0;        // sides over 4 T age + 2 T sqrt(T)
    std::int64_t match_bound_violations_age_scaled = 0;  // sides over 4 T age + 2 age sqrt(T)
    double worst_match_bound_margin = 0.0;          // max loss / bound

    std::int64_t steps = 0;
};

struct RunResult {
    SimulationConfig config;
    std::vector<TimeseriesRow> series;
    RunSummary summary;
};

/// Optional per-step hook at the observation point, mainly for tests.
struct StepObserver {
    virtual ~StepObserver() = default;
    virtual void at_observation(const MarketState& state, const StepReport& entry) = 0;
    virtual void after_step(const MarketState& state, const StepReport& report) = 0;
};

/// Runs `steps` steps from an empty pool. Throws InvalidParameter for bad configs.
RunResult run(const SimulationConfig& config, StepObserver* observer = nullptr);

/// Recomputes the headline summary fields from a series.
RunSummary summarize(const std::vector<TimeseriesRow>& series, const SimulationConfig& config);

}  // namespace matchsim
