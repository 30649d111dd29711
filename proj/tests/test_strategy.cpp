#include "doctest.h"

#include <cmath>

#include "matchsim/strategy.hpp"

using namespace matchsim;

TEST_CASE("utility uses the shorter remaining lifetime") {
    CHECK(match_utility({150, 0}, {140, 5}, 100) == 140 * 95);
    CHECK(match_utility({150, 0}, {150, 0}, 100) == 15000);
    CHECK(match_utility({150, 3}, {120, 99}, 100) == 120);
    CHECK(match_utility({150, 40}, {120, 10}, 100) == 120 * 60);
}

TEST_CASE("loss is the clamped shortfall") {
    CHECK(match_loss({150, 0}, {140, 5}, 100) == 15000 - 13300);
    CHECK(match_loss({150, 0}, {150, 0}, 100) == 0);
    CHECK(match_loss({140, 5}, {150, 0}, 100) == 0);  // 150 * 95 > 14000
    CHECK(match_loss({140, 50}, {150, 0}, 100) == 14000 - 150 * 50);
    CHECK(match_loss({120, 0}, {199, 0}, 100) == 0);
}

TEST_CASE("reasonable acceptance against a direct threshold") {
    auto threshold = [](int v, int a, int T) {
        const double t = T;
        return v * (t - a) * (1.0 - 1.0 / std::sqrt(t) - a / t);
    };
    CHECK(reasonable_threshold({150, 0}, 100) == doctest::Approx(13500.0));
    CHECK(accepts(StrategyKind::Reasonable, {150, 0}, {136, 0}, nullptr, 100));
    CHECK_FALSE(accepts(StrategyKind::Reasonable, {150, 0}, {140, 5}, nullptr, 100));

    for (int T : {16, 50, 100})
        for (int v = T; v < 2 * T; v += 3)
            for (int a = 0; a < T; a += 2)
                for (int pv = T; pv < 2 * T; pv += 5)
                    for (int pa = 0; pa < T; pa += 3) {
                        const double u = static_cast<double>(pv) * (T - std::max(a, pa));
                        REQUIRE(accepts(StrategyKind::Reasonable, {v, a}, {pv, pa}, nullptr, T) ==
                                (u >= threshold(v, a, T)));
                    }
}

TEST_CASE("accept-all accepts everyone") {
    CHECK(accepts(StrategyKind::AcceptAll, {199, 99}, {100, 0}, nullptr, 100));
    CHECK(accepts(StrategyKind::AcceptAll, {100, 0}, {199, 99}, nullptr, 100));
}

TEST_CASE("modified strategy accepts exactly within a strip") {
    const auto p = build_partition(16);
    CHECK(accepts(StrategyKind::ModifiedReasonable, {20, 3}, {20, 3}, &p, 16));
    CHECK_FALSE(accepts(StrategyKind::ModifiedReasonable, {16, 0}, {31, 0}, &p, 16));
    CHECK(accepts(StrategyKind::ModifiedReasonable, {16, 0}, {19, 0}, &p, 16));
    CHECK_THROWS_AS(accepts(StrategyKind::ModifiedReasonable, {16, 0}, {19, 0}, nullptr, 16), InvalidParameter);

    for (int v = 16; v < 32; ++v)
        for (int a = 0; a < 16; ++a)
            for (int pv = 16; pv < 32; ++pv)
                for (int pa = 0; pa < 16; ++pa) {
                    const bool same = p.strip_of({v, a}) == p.strip_of({pv, pa});
                    REQUIRE(mutually_accept(StrategyKind::ModifiedReasonable, {v, a}, {pv, pa}, &p, 16) == same);
                }
}

TEST_CASE("strategy names round-trip") {
    for (auto k : {StrategyKind::AcceptAll, StrategyKind::Reasonable, StrategyKind::ModifiedReasonable})
        CHECK(parse_strategy(to_string(k)) == k);
    CHECK_FALSE(parse_strategy("greedy").has_value());
}
