#include "doctest.h"

#include <cmath>

#include "matchsim/metrics.hpp"

using namespace matchsim;

namespace {

MarketState pool_of(std::initializer_list<std::pair<Gender, GridPoint>> agents, std::int64_t step) {
    MarketState s;
    s.step = step;
    for (auto [g, p] : agents) {
        Agent a{s.next_id++, g, p.value, step - p.age};
        (g == Gender::Man ? s.men : s.women).push_back(a);
    }
    return s;
}

}  // namespace

TEST_CASE("loss accumulator") {
    LossAccumulator acc;
    CHECK_FALSE(acc.avg_loss_all().has_value());
    CHECK_FALSE(acc.avg_loss_matched().has_value());

    acc.record(DepartureRecord{150, 100, 0, 15000, DepartureCause::AgedOut});
    CHECK(acc.loss_all == 15000);
    CHECK(acc.departures_all == 1);
    CHECK(acc.loss_matched == 0);
    CHECK(acc.departures_matched == 0);
    CHECK_FALSE(acc.avg_loss_matched().has_value());

    acc.record(DepartureRecord{150, 0, 13300, 1700, DepartureCause::Matched});
    acc.record(DepartureRecord{140, 5, 15000, 0, DepartureCause::Matched});
    CHECK(acc.loss_all == 16700);
    CHECK(acc.departures_all == 3);
    CHECK(acc.departures_matched == 2);
    CHECK(*acc.avg_loss_matched() == doctest::Approx(850.0));
    CHECK(*acc.avg_loss_all() == doctest::Approx(16700.0 / 3.0));

    LossAccumulator viaMatch;
    viaMatch.record(make_match_record({150, 0}, {140, 5}, 100, 0));
    CHECK(viaMatch.loss_all == 1700);
    CHECK(viaMatch.departures_all == 2);
}

TEST_CASE("strip census") {
    const auto p = build_partition(16);
    SUBCASE("empty pool") {
        const auto rows = strip_census(MarketState{}, p);
        CHECK(rows.size() == 7);
        for (const auto& r : rows) CHECK(r.population() == 0);
    }
    SUBCASE("single man at the top-left corner") {
        const auto rows = strip_census(pool_of({{Gender::Man, {16, 0}}}, 0), p);
        for (const auto& r : rows) {
            if (r.strip == StripId{StripKind::Type1, 1}) {
                CHECK(r.men == 1);
                CHECK(r.women == 0);
                CHECK(r.imbalance == 1);
            } else {
                CHECK(r.population() == 0);
            }
        }
    }
    SUBCASE("imbalance is the absolute difference") {
        const auto rows = strip_census(
            pool_of({{Gender::Woman, {20, 6}}, {Gender::Woman, {21, 6}}, {Gender::Man, {22, 6}}}, 10), p);
        const auto& r = rows.at(static_cast<std::size_t>(p.flat_index(StripId{StripKind::Type2, 1})));
        CHECK(r.men == 1);
        CHECK(r.women == 2);
        CHECK(r.imbalance == 1);
    }
}

TEST_CASE("diagonal census follows the tracked band") {
    CHECK(tracked_diagonal(100) == 150);
    CHECK(diagonal_census(MarketState{}, 100) == 0);
    CHECK(diagonal_census(pool_of({{Gender::Man, {150, 0}}}, 0), 100) == 1);
    CHECK(diagonal_census(pool_of({{Gender::Woman, {151, 0}}}, 0), 100) == 1);
    CHECK(diagonal_census(pool_of({{Gender::Man, {150, 1}}}, 1), 100) == 0);
    CHECK(diagonal_census(pool_of({{Gender::Man, {152, 1}}}, 1), 100) == 1);
}

TEST_CASE("hypothesis thresholds at n=500, T=100") {
    const auto p = build_partition(100);
    const auto rep = hypothesis_report(strip_census(MarketState{}, p), 0, 500, p);
    REQUIRE(rep.entries.size() == kBoundClauseCount);
    CHECK(rep.at(BoundClause::TotalPopulation).threshold == doctest::Approx(1.5 * 500 * 15 + 500));
    CHECK(rep.at(BoundClause::TotalPopulation).threshold == doctest::Approx(11750));
    CHECK(rep.at(BoundClause::Type1Population).threshold == doctest::Approx(1300));
    CHECK(rep.at(BoundClause::StripImbalance).threshold == doctest::Approx(2.0));
    CHECK(rep.at(BoundClause::BottomPopulation).threshold == doctest::Approx(3000));
    CHECK(rep.at(BoundClause::PopulationLowerBound).threshold == doctest::Approx(5000.0 / 3.0));
    CHECK_FALSE(rep.at(BoundClause::PopulationLowerBound).satisfied);
    CHECK(rep.at(BoundClause::TotalPopulation).satisfied);
}

TEST_CASE("hypothesis report picks the worst strip") {
    const auto p = build_partition(16);
    std::vector<CensusRow> census = strip_census(MarketState{}, p);
    census[2].men = 30;
    census[2].women = 20;
    census[2].imbalance = 10;
    census[6].men = 100;  // bottom strip, excluded from the imbalance clause
    census[6].imbalance = 100;
    const auto rep = hypothesis_report(census, 150, 10, p);
    const auto& t1 = rep.at(BoundClause::Type1Population);
    CHECK(t1.observed == 50);
    CHECK(t1.worst_strip == StripId{StripKind::Type1, 3});
    CHECK_FALSE(t1.satisfied);  // 50 > 26
    const auto& im = rep.at(BoundClause::StripImbalance);
    CHECK(im.observed == 10);
    CHECK(im.worst_strip == StripId{StripKind::Type1, 3});
    CHECK(rep.at(BoundClause::BottomPopulation).observed == 100);
    CHECK(rep.at(BoundClause::Type2Population).observed == 100);
}

TEST_CASE("per-match loss bound") {
    CHECK(match_loss_bound(0, 100) == doctest::Approx(2000.0));
    CHECK(match_loss_bound(7, 100) == doctest::Approx(2800.0 + 2000.0));
    CHECK(match_loss_bound_age_scaled(0, 100) == doctest::Approx(0.0));
    CHECK(match_loss_bound_check(make_match_record({150, 0}, {150, 0}, 100, 0), 100).both());
    // age-0 loss 2900 exceeds 2000
    const auto r = make_match_record({199, 0}, {170, 0}, 100, 0);
    CHECK_FALSE(match_loss_bound_check(r, 100).man_ok);
    CHECK(match_loss_bound_check(r, 100).woman_ok);
}

TEST_CASE("sufficient-condition check") {
    auto rhs = [](double n, double T, double c) {
        const double e = std::exp(12.0);
        const double a = 3654 + 2436 * e + 546 * (e + 1) * c;
        return a * a * (3 * c + 4) * std::pow(T, 3) * std::pow(std::log(n) / std::log(2.0), 2) * std::log(n);
    };
    const auto a = constraints_satisfied(500, 100, 1);
    CHECK_FALSE(a.satisfied());
    CHECK_FALSE(a.T_ok);
    const auto b = constraints_satisfied(500, 676, 1);
    CHECK_FALSE(b.satisfied());
    CHECK(b.T_ok);
    CHECK_FALSE(b.n_ok);
    const auto c = constraints_satisfied(1e40, 676, 1);
    CHECK(c.satisfied());
    CHECK(c.n_rhs == doctest::Approx(rhs(1e40, 676, 1)).epsilon(1e-12));
    CHECK(c.n_rhs > 7e32);
    CHECK(c.n_rhs < 9e32);
    CHECK_FALSE(constraints_satisfied(1e40, 676, 0.5).c_ok);
}
