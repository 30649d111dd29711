#include "matchsim/market.hpp"

#include <algorithm>
#include <numeric>
#include <span>
#include <string>

namespace matchsim {

MatchRecord make_match_record(GridPoint man, GridPoint woman, Lifetime T, std::int64_t step) noexcept {
    MatchRecord rec;
    rec.step = step;
    rec.man_value = man.value;
    rec.woman_value = woman.value;
    rec.man_age = man.age;
    rec.woman_age = woman.age;
    rec.man_utility = match_utility(man, woman, T);
    rec.woman_utility = match_utility(woman, man, T);
    rec.man_loss = match_loss(man, woman, T);
    rec.woman_loss = match_loss(woman, man, T);
    return rec;
}

std::vector<Agent> spawn_entrants(std::int64_t n, Lifetime T, std::int64_t step, std::int64_t& next_id,
                                  SplitMix64& rng) {
    std::vector<Agent> out;
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        Agent a;
        a.id = next_id++;
        a.gender = rng.coin() ? Gender::Woman : Gender::Man;
        a.value = T + static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(T)));
        a.entry_step = step;
        out.push_back(a);
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> random_pairing(std::size_t men_count, std::size_t women_count,
                                                                SplitMix64& rng) {
    std::vector<std::size_t> men(men_count);
    std::vector<std::size_t> women(women_count);
    std::iota(men.begin(), men.end(), std::size_t{0});
    std::iota(women.begin(), women.end(), std::size_t{0});
    shuffle(std::span(men), rng);
    shuffle(std::span(women), rng);

    const std::size_t k = std::min(men_count, women_count);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(k);
    for (std::size_t i = 0; i < k; ++i) pairs.emplace_back(men[i], women[i]);
    return pairs;
}

Market::Market(MarketParams params, const StripPartition* part) : params_(params), part_(part) {
    if (params_.entrants_per_step < 0) throw InvalidParameter("entrants per step must be >= 0");
    if (params_.lifetime < 1) throw InvalidParameter("lifetime must be >= 1");
    if (params_.strategy == StrategyKind::ModifiedReasonable) {
        if (part_ == nullptr) throw InvalidParameter("modified strategy needs a strip partition");
        if (part_->lifetime() != params_.lifetime)
            throw InvalidParameter("partition built for T=" + std::to_string(part_->lifetime()) +
                                   " but market has T=" + std::to_string(params_.lifetime));
    }
    state_.rng = SplitMix64(params_.seed);
}

StepReport Market::step() {
    StepReport report = begin_step();
    finish_step(report);
    return report;
}

StepReport Market::begin_step() {
    StepReport report;
    report.step = state_.step;
    auto entrants = spawn_entrants(params_.entrants_per_step, params_.lifetime, state_.step, state_.next_id, state_.rng);
    report.entrants = static_cast<std::int64_t>(entrants.size());
    for (const Agent& a : entrants) (a.gender == Gender::Man ? state_.men : state_.women).push_back(a);
    report.men_after_entry = static_cast<std::int64_t>(state_.men.size());
    report.women_after_entry = static_cast<std::int64_t>(state_.women.size());
    report.population_after_entry = report.men_after_entry + report.women_after_entry;
    return report;
}

void Market::finish_step(StepReport& report) {
    const Lifetime T = params_.lifetime;
    const std::int64_t now = state_.step;
    auto& men = state_.men;
    auto& women = state_.women;

    man_matched_.assign(men.size(), 0);
    woman_matched_.assign(women.size(), 0);

    const auto pairs = random_pairing(men.size(), women.size(), state_.rng);
    report.proposed_pairs = static_cast<std::int64_t>(pairs.size());
    for (auto [mi, wi] : pairs) {
        const GridPoint m = men[mi].point(now);
        const GridPoint w = women[wi].point(now);
        if (!mutually_accept(params_.strategy, m, w, part_, T)) continue;
        man_matched_[mi] = 1;
        woman_matched_[wi] = 1;
        report.matches.push_back(make_match_record(m, w, T, now));
    }

    const std::int64_t next = now + 1;
    auto sweep = [&](std::vector<Agent>& side, const std::vector<char>& matched) {
        std::size_t keep = 0;
        for (std::size_t i = 0; i < side.size(); ++i) {
            if (matched[i]) continue;
            const Agent& a = side[i];
            if (a.age(next) >= T) {
                const std::int64_t full = static_cast<std::int64_t>(a.value) * T;
                report.aged_out.push_back({a.value, T, 0, full, DepartureCause::AgedOut});
                continue;
            }
            side[keep++] = a;
        }
        side.resize(keep);
    };
    sweep(men, man_matched_);
    sweep(women, woman_matched_);
    state_.step = next;
}

}  // namespace matchsim
