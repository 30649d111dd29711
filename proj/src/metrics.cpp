#include "matchsim/metrics.hpp"

#include <cmath>
#include <cstdlib>

namespace matchsim {

void LossAccumulator::record(const DepartureRecord& rec) noexcept {
    loss_all += rec.loss;
    ++departures_all;
    if (rec.cause == DepartureCause::Matched) {
        loss_matched += rec.loss;
        ++departures_matched;
    } else {
        ++departures_aged_out;
    }
}

void LossAccumulator::record(const MatchRecord& rec) noexcept {
    record(rec.man_departure());
    record(rec.woman_departure());
}

void LossAccumulator::record(const StepReport& report) noexcept {
    for (const auto& m : report.matches) record(m);
    for (const auto& d : report.aged_out) record(d);
}

std::optional<double> LossAccumulator::avg_loss_all() const noexcept {
    if (departures_all == 0) return std::nullopt;
    return static_cast<double>(loss_all) / static_cast<double>(departures_all);
}

std::optional<double> LossAccumulator::avg_loss_matched() const noexcept {
    if (departures_matched == 0) return std::nullopt;
    return static_cast<double>(loss_matched) / static_cast<double>(departures_matched);
}

std::vector<CensusRow> strip_census(const MarketState& state, const StripPartition& part) {
    std::vector<CensusRow> rows(static_cast<std::size_t>(part.strip_count()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].step = state.step;
        rows[i].strip = part.from_flat(static_cast<std::int32_t>(i));
    }
    for (const Agent& a : state.men) ++rows[static_cast<std::size_t>(part.flat_index(a.point(state.step)))].men;
    for (const Agent& a : state.women) ++rows[static_cast<std::size_t>(part.flat_index(a.point(state.step)))].women;
    for (auto& r : rows) r.imbalance = std::llabs(r.men - r.women);
    return rows;
}

std::int64_t diagonal_census(const MarketState& state, Lifetime T) {
    const std::int32_t d0 = tracked_diagonal(T);
    std::int64_t count = 0;
    auto tally = [&](const std::vector<Agent>& side) {
        for (const Agent& a : side) {
            const std::int32_t d = diag_coord(a.point(state.step));
            if (d == d0 || d == d0 + 1) ++count;
        }
    };
    tally(state.men);
    tally(state.women);
    return count;
}

std::string_view to_string(BoundClause clause) noexcept {
    switch (clause) {
        case BoundClause::TotalPopulation: return "total_population";
        case BoundClause::Type1Population: return "type1_strip_population";
        case BoundClause::Type2Population: return "type2_strip_population";
        case BoundClause::BottomPopulation: return "bottom_strip_population";
        case BoundClause::StripImbalance: return "strip_imbalance";
        case BoundClause::PopulationLowerBound: return "population_lower_bound";
    }
    return "?";
}

namespace {

BoundEntry make_entry(BoundClause clause, double threshold, double observed, std::optional<StripId> strip = {}) {
    BoundEntry e;
    e.clause = clause;
    e.threshold = threshold;
    e.observed = observed;
    e.margin = observed / threshold;
    e.satisfied = is_lower_bound(clause) ? observed >= threshold : observed <= threshold;
    e.worst_strip = strip;
    return e;
}

// Largest observed/threshold over a set of strips.
template <class Threshold, class Observed, class Filter>
BoundEntry worst_over(BoundClause clause, const std::vector<CensusRow>& census, Filter keep, Threshold threshold,
                      Observed observed) {
    std::optional<BoundEntry> worst;
    for (const auto& row : census) {
        if (!keep(row)) continue;
        BoundEntry e = make_entry(clause, threshold(row), static_cast<double>(observed(row)), row.strip);
        if (!worst || e.margin > worst->margin) worst = e;
    }
    return worst ? *worst : make_entry(clause, 1.0, 0.0);
}

}  // namespace

BoundReport hypothesis_report(const std::vector<CensusRow>& census, std::int64_t population, std::int64_t n,
                              const StripPartition& part) {
    const double nn = static_cast<double>(n);
    const double root = std::sqrt(static_cast<double>(part.lifetime()));
    const double strips = part.strip_count();
    const std::int32_t bottom = part.type2_count();

    auto is_type1 = [](const CensusRow& r) { return r.strip.kind == StripKind::Type1; };
    auto is_type2 = [](const CensusRow& r) { return r.strip.kind == StripKind::Type2; };
    auto is_bottom = [bottom](const CensusRow& r) { return r.strip.kind == StripKind::Type2 && r.strip.index == bottom; };
    auto not_bottom = [&](const CensusRow& r) { return !is_bottom(r); };
    auto pop = [](const CensusRow& r) { return r.population(); };
    auto imb = [](const CensusRow& r) { return r.imbalance; };

    BoundReport report;
    report.entries.push_back(
        make_entry(BoundClause::TotalPopulation, 1.5 * nn * strips + nn, static_cast<double>(population)));
    report.entries.push_back(worst_over(BoundClause::Type1Population, census, is_type1,
                                        [&](const CensusRow&) { return 2.6 * nn; }, pop));
    report.entries.push_back(worst_over(
        BoundClause::Type2Population, census, is_type2,
        [&](const CensusRow& r) { return 7.5 * nn * root / part.height(r.strip); }, pop));
    report.entries.push_back(worst_over(BoundClause::BottomPopulation, census, is_bottom,
                                        [&](const CensusRow&) { return 60.0 * nn / root; }, pop));
    report.entries.push_back(worst_over(BoundClause::StripImbalance, census, not_bottom,
                                        [&](const CensusRow&) { return nn / (25.0 * root); }, imb));
    report.entries.push_back(
        make_entry(BoundClause::PopulationLowerBound, nn * root / 3.0, static_cast<double>(population)));
    return report;
}

double match_loss_bound(std::int32_t age, Lifetime T) noexcept {
    const double t = static_cast<double>(T);
    return 4.0 * t * age + 2.0 * t * std::sqrt(t);
}

double match_loss_bound_age_scaled(std::int32_t age, Lifetime T) noexcept {
    const double t = static_cast<double>(T);
    return 4.0 * t * age + 2.0 * age * std::sqrt(t);
}

SideCheck match_loss_bound_check(const MatchRecord& rec, Lifetime T) noexcept {
    return {static_cast<double>(rec.man_loss) <= match_loss_bound(rec.man_age, T),
            static_cast<double>(rec.woman_loss) <= match_loss_bound(rec.woman_age, T)};
}

SideCheck match_loss_bound_check_age_scaled(const MatchRecord& rec, Lifetime T) noexcept {
    return {static_cast<double>(rec.man_loss) <= match_loss_bound_age_scaled(rec.man_age, T),
            static_cast<double>(rec.woman_loss) <= match_loss_bound_age_scaled(rec.woman_age, T)};
}

ConstraintCheck constraints_satisfied(double n, double T, double c) {
    ConstraintCheck out;
    out.c_ok = c >= out.c_rhs;
    out.T_ok = T >= out.T_rhs;
    const double e12 = std::exp(12.0);
    const double lead = 3654.0 + 2436.0 * e12 + 546.0 * (e12 + 1.0) * c;
    const double log2n = std::log2(n);
    out.n_rhs = lead * lead * (3.0 * c + 4.0) * T * T * T * log2n * log2n * std::log(n);
    out.n_ok = n >= out.n_rhs;
    return out;
}

}  // namespace matchsim
