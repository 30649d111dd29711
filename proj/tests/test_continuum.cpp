#include "doctest.h"

#include <cmath>

#include "matchsim/continuum.hpp"

using namespace matchsim;

namespace {

// Brute-force step: all ordered cell pairs, no interval tricks.
FlowReport naive_step(DensityGrid& g, StrategyKind kind, const StripPartition* part, double n) {
    const Lifetime T = g.T;
    FlowReport f;
    for (int v = T; v < 2 * T; ++v) g.at({v, 0}) += n / (2.0 * T);
    f.entered_mass = n;
    f.population_after_entry = g.population();
    const double M = g.gender_total();
    std::vector<double> next(g.mass.size(), 0.0);
    if (M > 0) {
        for (int a = 0; a < T; ++a)
            for (int v = T; v < 2 * T; ++v) {
                const GridPoint x{v, a};
                double acc = 0.0, loss = 0.0;
                for (int b = 0; b < T; ++b)
                    for (int u = T; u < 2 * T; ++u) {
                        const GridPoint y{u, b};
                        if (!mutually_accept(kind, x, y, part, T)) continue;
                        acc += g.at(y);
                        loss += g.at(y) * static_cast<double>(match_loss(x, y, T));
                    }
                const double mu = g.at(x);
                f.matched_mass += 2.0 * mu * acc / M;
                f.loss_added += 2.0 * mu * loss / M;
                next[g.index(x)] = mu - mu * acc / M;
            }
    } else {
        next = g.mass;
    }
    std::vector<double> shifted(g.mass.size(), 0.0);
    for (int a = 0; a < T; ++a)
        for (int v = T; v < 2 * T; ++v) {
            const double m = next[g.index({v, a})];
            if (a + 1 == T) {
                f.aged_out_mass += 2.0 * m;
                f.loss_added += 2.0 * m * v * T;
            } else {
                shifted[g.index({v, a + 1})] = m;
            }
        }
    g.mass = shifted;
    ++g.step;
    return f;
}

}  // namespace

TEST_CASE("initial grid is empty") {
    for (int T : {4, 16, 100}) {
        const auto g = continuum_init(T);
        CHECK(g.population() == 0.0);
        CHECK(g.mass.size() == static_cast<std::size_t>(T) * T);
    }
    CHECK_THROWS_AS(continuum_init(3), InvalidParameter);
}

TEST_CASE("first step admits exactly n") {
    auto g = continuum_init(16);
    const auto rel = AcceptanceRelation::build(StrategyKind::Reasonable, nullptr, 16);
    const auto f = continuum_step(g, rel, 500);
    CHECK(f.population_after_entry == doctest::Approx(500.0).epsilon(1e-12));
}

TEST_CASE("accept-all clears the pool each step") {
    auto g = continuum_init(20);
    const auto rel = AcceptanceRelation::build(StrategyKind::AcceptAll, nullptr, 20);
    for (int s = 0; s < 10; ++s) {
        const auto f = continuum_step(g, rel, 100);
        CHECK(f.population_after_entry == doctest::Approx(100.0));
        CHECK(g.population() == doctest::Approx(0.0).scale(1.0));
        // loss per unit of matched mass is E[(V1 - V2)^+] * T over a uniform grid
        double brute = 0.0;
        for (int a = 20; a < 40; ++a)
            for (int b = 20; b < 40; ++b) brute += std::max(0, (a - b) * 20);
        CHECK(f.loss_added / f.matched_mass == doctest::Approx(brute / 400.0));
    }
}

TEST_CASE("interval update agrees with brute force") {
    for (auto kind : {StrategyKind::AcceptAll, StrategyKind::Reasonable, StrategyKind::ModifiedReasonable}) {
        const Lifetime T = 16;
        const auto part = build_partition(T);
        const auto rel = AcceptanceRelation::build(kind, &part, T);
        auto fast = continuum_init(T), slow = continuum_init(T);
        for (int s = 0; s < 40; ++s) {
            const auto a = continuum_step(fast, rel, 37.0);
            const auto b = naive_step(slow, kind, &part, 37.0);
            REQUIRE(a.matched_mass == doctest::Approx(b.matched_mass).epsilon(1e-10));
            REQUIRE(a.loss_added == doctest::Approx(b.loss_added).epsilon(1e-10));
            REQUIRE(a.aged_out_mass == doctest::Approx(b.aged_out_mass).epsilon(1e-10));
            for (std::size_t i = 0; i < fast.mass.size(); ++i)
                REQUIRE(fast.mass[i] == doctest::Approx(slow.mass[i]).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("mass is conserved and never negative") {
    const Lifetime T = 36;
    const auto part = build_partition(T);
    for (auto kind : {StrategyKind::Reasonable, StrategyKind::ModifiedReasonable}) {
        const auto rel = AcceptanceRelation::build(kind, &part, T);
        auto g = continuum_init(T);
        double in = 0.0, out = 0.0;
        for (int s = 0; s < 200; ++s) {
            const double before = g.population();
            const auto f = continuum_step(g, rel, 80.0);
            in += f.entered_mass;
            out += f.matched_mass + f.aged_out_mass;
            REQUIRE(std::abs(before + f.entered_mass - f.matched_mass - f.aged_out_mass - g.population()) <=
                    1e-12 * std::max(1.0, in));
            REQUIRE(f.matched_mass <= f.population_after_entry + 1e-12);
            for (double m : g.mass) REQUIRE(m >= 0.0);
        }
        CHECK(std::abs(in - out - g.population()) <= 1e-9 * in);
    }
}

TEST_CASE("acceptance relation rejects a partition for another T") {
    const auto part = build_partition(16);
    const auto rel = AcceptanceRelation::build(StrategyKind::ModifiedReasonable, &part, 16);
    auto g = continuum_init(25);
    CHECK_THROWS_AS(continuum_step(g, rel, 1.0), InvalidParameter);
}

TEST_CASE("runs are deterministic and converge") {
    const ContinuumConfig cfg{200.0, 36, 600, StrategyKind::ModifiedReasonable};
    const auto a = continuum_run(cfg), b = continuum_run(cfg);
    CHECK(a.avg_population == b.avg_population);
    CHECK(a.avg_loss == b.avg_loss);
    CHECK(a.converged);
    REQUIRE(a.convergence_step.has_value());
    CHECK(*a.convergence_step < 300);
    CHECK(a.series.size() == 600);
}

TEST_CASE("continuum sits below the accept-all population only for accept-all") {
    const auto all = continuum_run({100.0, 25, 200, StrategyKind::AcceptAll});
    const auto rea = continuum_run({100.0, 25, 200, StrategyKind::Reasonable});
    const auto mod = continuum_run({100.0, 25, 200, StrategyKind::ModifiedReasonable});
    CHECK(all.final_population == doctest::Approx(100.0));
    CHECK(rea.final_population > all.final_population);
    CHECK(mod.final_population > rea.final_population);
    CHECK(*all.final_loss == doctest::Approx((25.0 * 25.0 - 1.0) / 6.0));
}
