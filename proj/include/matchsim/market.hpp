#pragma once

// Discrete market engine.
//
// One step, in order:
//   1. n entrants arrive at age 0 (fair-coin gender, uniform value in [T, 2T)).
//   2. Observation point: the pool is as it will be offered for pairing.
//   3. All men and all women are paired uniformly at random (one maximal pairing).
//   4. A proposed pair matches iff both sides accept; matched agents leave.
//   5. Survivors age by one; anyone reaching age T leaves unmatched.
//   6. The step counter advances.
// begin_step() runs 1-2 and finish_step() runs 3-6, so callers can take
// censuses at the observation point.

#include <cstdint>
#include <utility>
#include <vector>

#include "matchsim/geometry.hpp"
#include "matchsim/rng.hpp"
#include "matchsim/strategy.hpp"

namespace matchsim {

enum class Gender : std::uint8_t { Man, Woman };

struct Agent {
    std::int64_t id = 0;
    Gender gender = Gender::Man;
    std::int32_t value = 0;
    std::int64_t entry_step = 0;

    std::int32_t age(std::int64_t step) const noexcept { return static_cast<std::int32_t>(step - entry_step); }
    GridPoint point(std::int64_t step) const noexcept { return {value, age(step)}; }
};

enum class DepartureCause : std::uint8_t { Matched, AgedOut };

struct DepartureRecord {
    std::int32_t value = 0;
    std::int32_t age_at_departure = 0;  // T for agents that aged out
    std::int64_t utility = 0;
    std::int64_t loss = 0;
    DepartureCause cause = DepartureCause::Matched;
};

struct MatchRecord {
    std::int64_t step = 0;
    std::int32_t man_value = 0;
    std::int32_t woman_value = 0;
    std::int32_t man_age = 0;
    std::int32_t woman_age = 0;
    std::int64_t man_utility = 0;
    std::int64_t woman_utility = 0;
    std::int64_t man_loss = 0;
    std::int64_t woman_loss = 0;

    DepartureRecord man_departure() const noexcept {
        return {man_value, man_age, man_utility, man_loss, DepartureCause::Matched};
    }
    DepartureRecord woman_departure() const noexcept {
        return {woman_value, woman_age, woman_utility, woman_loss, DepartureCause::Matched};
    }
};

MatchRecord make_match_record(GridPoint man, GridPoint woman, Lifetime T, std::int64_t step) noexcept;

struct StepReport {
    std::int64_t step = 0;
    std::int64_t entrants = 0;
    std::int64_t population_after_entry = 0;
    std::int64_t men_after_entry = 0;
    std::int64_t women_after_entry = 0;
    std::int64_t proposed_pairs = 0;
    std::vector<MatchRecord> matches;
    std::vector<DepartureRecord> aged_out;
};

struct MarketState {
    std::int64_t step = 0;
    std::int64_t next_id = 0;
    std::vector<Agent> men;    // ascending id
    std::vector<Agent> women;  // ascending id
    SplitMix64 rng;

    std::int64_t population() const noexcept { return static_cast<std::int64_t>(men.size() + women.size()); }
};

/// n fresh agents with sequential ids starting at next_id (advanced in place).
std::vector<Agent> spawn_entrants(std::int64_t n, Lifetime T, std::int64_t step, std::int64_t& next_id,
                                  SplitMix64& rng);

/// Uniformly random maximal pairing between `men_count` men and `women_count`
/// women: both index ranges are shuffled and zipped. Returns (man, woman)
/// index pairs, min(men_count, women_count) of them.
std::vector<std::pair<std::size_t, std::size_t>> random_pairing(std::size_t men_count, std::size_t women_count,
                                                                SplitMix64& rng);

struct MarketParams {
    std::int64_t entrants_per_step = 0;
    Lifetime lifetime = 0;
    StrategyKind strategy = StrategyKind::ModifiedReasonable;
    std::uint64_t seed = 0;
};

class Market {
public:
    /// `part` must outlive the market; it may be null unless the strategy is
    /// ModifiedReasonable.
    Market(MarketParams params, const StripPartition* part);

    StepReport step();

    StepReport begin_step();
    void finish_step(StepReport& report);

    const MarketState& state() const noexcept { return state_; }
    const MarketParams& params() const noexcept { return params_; }
    const StripPartition* partition() const noexcept { return part_; }

private:
    MarketParams params_;
    const StripPartition* part_;
    MarketState state_;
    std::vector<char> man_matched_;
    std::vector<char> woman_matched_;
};

}  // namespace matchsim
