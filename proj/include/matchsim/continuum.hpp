#pragma once

// Deterministic mean-field version of the market.
//
// Each gender carries a mass density over the (value, age) grid; the two
// genders are identical, so one grid is stored and the population is twice its
// total. A step mirrors the discrete engine in expectation:
//   1. mass n/(2T) enters at every (v, 0);
//   2. with M the per-gender total, cell x loses mass mu_x * A(x) / M, where A(x)
//      is the mass of cells that mutually accept x;
//   3. the grid ages by one, mass leaving age T-1 exits unmatched.

#include <cstdint>
#include <optional>
#include <vector>

#include "matchsim/geometry.hpp"
#include "matchsim/strategy.hpp"

namespace matchsim {

struct DensityGrid {
    Lifetime T = 0;
    std::int64_t step = 0;
    std::vector<double> mass;  // index age * T + (value - T)

    double& at(GridPoint p) { return mass[index(p)]; }
    double at(GridPoint p) const { return mass[index(p)]; }
    std::size_t index(GridPoint p) const noexcept {
        return static_cast<std::size_t>(p.age) * static_cast<std::size_t>(T) + static_cast<std::size_t>(p.value - T);
    }
    double gender_total() const noexcept;
    double population() const noexcept { return 2.0 * gender_total(); }
};

DensityGrid continuum_init(Lifetime T);

/// Mutual-acceptance relation between grid cells, precomputed once per
/// (strategy, T). For every cell x and partner age b, the partner values that
/// mutually accept x form one contiguous interval; the builder checks this and
/// throws std::logic_error otherwise.
class AcceptanceRelation {
public:
    struct Range {
        std::int32_t lo = 0;  // value offsets, inclusive; empty when lo > hi
        std::int32_t hi = -1;
        bool empty() const noexcept { return lo > hi; }
    };

    static AcceptanceRelation build(StrategyKind kind, const StripPartition* part, Lifetime T);

    Lifetime lifetime() const noexcept { return T_; }
    StrategyKind strategy() const noexcept { return kind_; }
    Range range(GridPoint self, std::int32_t partner_age) const noexcept {
        const std::size_t cell = static_cast<std::size_t>(self.age) * T_ + (self.value - T_);
        return ranges_[cell * T_ + static_cast<std::size_t>(partner_age)];
    }

private:
    Lifetime T_ = 0;
    StrategyKind kind_ = StrategyKind::AcceptAll;
    std::vector<Range> ranges_;
};

struct FlowReport {
    double population_after_entry = 0.0;
    double entered_mass = 0.0;   // both genders
    double matched_mass = 0.0;   // both genders
    double aged_out_mass = 0.0;  // both genders
    double loss_added = 0.0;     // loss over all departing mass this step
    double diag_population = 0.0;  // both genders on the tracked diagonal, after entry
};

FlowReport continuum_step(DensityGrid& grid, const AcceptanceRelation& rel, double n);

struct ContinuumConfig {
    double n = 500.0;
    Lifetime T = 100;
    std::int64_t steps = 2000;
    StrategyKind strategy = StrategyKind::ModifiedReasonable;
};

struct ContinuumSummary {
    ContinuumConfig config;
    std::vector<FlowReport> series;

    double avg_population = 0.0;              // full horizon
    std::optional<double> avg_loss;           // loss per unit departing mass, full horizon
    double avg_population_after_burn_in = 0.0;  // steps >= T
    std::optional<double> avg_loss_after_burn_in;
    double final_population = 0.0;
    std::optional<double> final_loss;  // last step's loss per departing mass
    bool converged = false;
    std::optional<std::int64_t> convergence_step;  // start of the first quiet window

    std::optional<double> loss_over_T() const {
        return avg_loss ? std::optional<double>(*avg_loss / config.T) : std::nullopt;
    }
};

/// Relative population change below which a step counts as quiet.
inline constexpr double kConvergenceTolerance = 1e-9;

/// Converged once the population changes by less than kConvergenceTolerance
/// (relative) for T consecutive steps.
ContinuumSummary continuum_run(const ContinuumConfig& config);
ContinuumSummary continuum_run(const ContinuumConfig& config, const AcceptanceRelation& rel);

}  // namespace matchsim
