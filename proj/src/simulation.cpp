#include "matchsim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace matchsim {

namespace {

void validate(const SimulationConfig& c) {
    if (c.n < 0) throw InvalidParameter("n must be >= 0");
    if (c.T < 1) throw InvalidParameter("T must be >= 1");
    if (c.steps < 1) throw InvalidParameter("steps must be >= 1");
}

}  // namespace

RunSummary summarize(const std::vector<TimeseriesRow>& series, const SimulationConfig& config) {
    RunSummary s;
    s.steps = static_cast<std::int64_t>(series.size());
    if (series.empty()) return s;

    double pop_sum = 0.0;
    for (const auto& row : series) {
        pop_sum += static_cast<double>(row.population);
        s.total_entrants += row.entrants;
    }
    s.avg_population = pop_sum / static_cast<double>(series.size());

    const double T = static_cast<double>(config.T);
    const double root = std::sqrt(T);
    if (config.n > 0) s.normalized_population = s.avg_population / (static_cast<double>(config.n) * root);

    const auto& last = series.back();
    s.departures_matched = last.cum_departures_matched;
    s.departures_aged_out = last.cum_departures - last.cum_departures_matched;
    if (last.cum_departures > 0) {
        s.avg_loss_all = static_cast<double>(last.cum_loss) / static_cast<double>(last.cum_departures);
        s.loss_over_T = *s.avg_loss_all / T;
        s.normalized_loss = *s.avg_loss_all / (T * root);
    }
    if (last.cum_departures_matched > 0) {
        s.avg_loss_matched = static_cast<double>(last.cum_loss_matched) / static_cast<double>(last.cum_departures_matched);
        s.loss_over_T_matched = *s.avg_loss_matched / T;
    }
    s.final_pool = s.total_entrants - last.cum_departures;
    return s;
}

RunResult run(const SimulationConfig& config, StepObserver* observer) {
    validate(config);

    std::unique_ptr<StripPartition> part;
    if (config.T >= 4) part = std::make_unique<StripPartition>(build_partition(config.T));
    const bool modified = config.strategy == StrategyKind::ModifiedReasonable;

    Market market({config.n, config.T, config.strategy, config.seed}, part.get());

    RunResult result;
    result.config = config;
    result.series.reserve(static_cast<std::size_t>(config.steps));

    RunSummary diag;
    for (auto& tally : diag.clauses) tally.worst_margin = 0.0;
    diag.clauses[static_cast<std::size_t>(BoundClause::PopulationLowerBound)].worst_margin = INFINITY;

    LossAccumulator loss;
    for (std::int64_t i = 0; i < config.steps; ++i) {
        StepReport report = market.begin_step();
        const MarketState& state = market.state();

        TimeseriesRow row;
        row.step = report.step;
        row.population = report.population_after_entry;
        row.men = report.men_after_entry;
        row.women = report.women_after_entry;
        row.entrants = report.entrants;
        row.diag_population = diagonal_census(state, config.T);

        // The population/imbalance bounds are stated from step sqrt(T) on.
        if (modified && report.step >= part->width()) {
            const auto census = strip_census(state, *part);
            const auto bounds = hypothesis_report(census, report.population_after_entry, config.n, *part);
            for (const auto& e : bounds.entries) {
                auto& tally = diag.clauses[static_cast<std::size_t>(e.clause)];
                ++tally.observed_steps;
                if (!e.satisfied) ++tally.violations;
                tally.worst_margin = is_lower_bound(e.clause) ? std::min(tally.worst_margin, e.margin)
                                                              : std::max(tally.worst_margin, e.margin);
            }
        }
        if (observer) observer->at_observation(state, report);

        market.finish_step(report);
        if (observer) observer->after_step(market.state(), report);

        if (modified) {
            for (const auto& m : report.matches) {
                ++diag.matches_checked;
                const auto check = match_loss_bound_check(m, config.T);
                diag.match_bound_violations += !check.man_ok + !check.woman_ok;
                const auto scaled = match_loss_bound_check_age_scaled(m, config.T);
                diag.match_bound_violations_age_scaled += !scaled.man_ok + !scaled.woman_ok;
                diag.worst_match_bound_margin =
                    std::max({diag.worst_match_bound_margin,
                              static_cast<double>(m.man_loss) / match_loss_bound(m.man_age, config.T),
                              static_cast<double>(m.woman_loss) / match_loss_bound(m.woman_age, config.T)});
            }
        }

        loss.record(report);
        row.matches = static_cast<std::int64_t>(report.matches.size());
        row.aged_out = static_cast<std::int64_t>(report.aged_out.size());
        row.cum_loss = loss.loss_all;
        row.cum_departures = loss.departures_all;
        row.cum_loss_matched = loss.loss_matched;
        row.cum_departures_matched = loss.departures_matched;
        result.series.push_back(row);
    }

    result.summary = summarize(result.series, config);
    result.summary.clauses = diag.clauses;
    if (!modified) {
        for (auto& tally : result.summary.clauses) tally.worst_margin = 0.0;
    }
    result.summary.matches_checked = diag.matches_checked;
    result.summary.match_bound_violations = diag.match_bound_violations;
    result.summary.match_bound_violations_age_scaled = diag.match_bound_violations_age_scaled;
    result.summary.worst_match_bound_margin = diag.worst_match_bound_margin;
    return result;
}

}  // namespace matchsim
