#include "matchsim/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace matchsim {

double DensityGrid::gender_total() const noexcept {
    double total = 0.0;
    for (double m : mass) total += m;
    return total;
}

DensityGrid continuum_init(Lifetime T) {
    if (T < 4) throw InvalidParameter("lifetime T must be >= 4, got " + std::to_string(T));
    DensityGrid grid;
    grid.T = T;
    grid.mass.assign(static_cast<std::size_t>(T) * static_cast<std::size_t>(T), 0.0);
    return grid;
}

AcceptanceRelation AcceptanceRelation::build(StrategyKind kind, const StripPartition* part, Lifetime T) {
    if (T < 1) throw InvalidParameter("lifetime must be >= 1");
    AcceptanceRelation rel;
    rel.T_ = T;
    rel.kind_ = kind;
    const auto cells = static_cast<std::size_t>(T) * static_cast<std::size_t>(T);
    rel.ranges_.resize(cells * static_cast<std::size_t>(T));

    for (std::int32_t a = 0; a < T; ++a) {
        for (std::int32_t v = 0; v < T; ++v) {
            const GridPoint self{T + v, a};
            const std::size_t cell = static_cast<std::size_t>(a) * T + v;
            for (std::int32_t b = 0; b < T; ++b) {
                Range r;
                bool closed = false;
                for (std::int32_t u = 0; u < T; ++u) {
                    if (!mutually_accept(kind, self, {T + u, b}, part, T)) {
                        if (!r.empty()) closed = true;
                        continue;
                    }
                    if (closed)
                        throw std::logic_error("acceptance set is not an interval at value " + std::to_string(T + v) +
                                               ", age " + std::to_string(a));
                    if (r.empty()) r.lo = u;
                    r.hi = u;
                }
                rel.ranges_[cell * T + b] = r;
            }
        }
    }
    return rel;
}

FlowReport continuum_step(DensityGrid& grid, const AcceptanceRelation& rel, double n) {
    const Lifetime T = grid.T;
    if (rel.lifetime() != T) throw InvalidParameter("acceptance relation built for a different T");
    const auto width = static_cast<std::size_t>(T);

    FlowReport flow;
    const double inflow = n / (2.0 * T);
    for (std::size_t v = 0; v < width; ++v) grid.mass[v] += inflow;
    flow.entered_mass = n;

    const double M = grid.gender_total();
    flow.population_after_entry = 2.0 * M;
    {
        const std::int32_t d0 = tracked_diagonal(T);
        double diag = 0.0;
        for (std::int32_t a = 0; a < T; ++a) {
            for (std::int32_t d = d0; d <= d0 + 1; ++d) {
                const std::int32_t value = d + 2 * a;
                if (value >= T && value < 2 * T) diag += grid.at({value, a});
            }
        }
        flow.diag_population = 2.0 * diag;
    }

    double matched = 0.0;
    double loss = 0.0;
    if (M > 0.0) {
        // Per age row: prefix sums of mass and of value * mass.
        std::vector<double> pre_mass((width + 1) * width, 0.0);
        std::vector<double> pre_value((width + 1) * width, 0.0);
        for (std::size_t b = 0; b < width; ++b) {
            double* pm = &pre_mass[b * (width + 1)];
            double* pv = &pre_value[b * (width + 1)];
            for (std::size_t u = 0; u < width; ++u) {
                const double m = grid.mass[b * width + u];
                pm[u + 1] = pm[u] + m;
                pv[u + 1] = pv[u] + m * static_cast<double>(T + static_cast<std::int32_t>(u));
            }
        }

        std::vector<double> removed(grid.mass.size(), 0.0);
        for (std::int32_t a = 0; a < T; ++a) {
            for (std::int32_t v = 0; v < T; ++v) {
                const std::size_t cell = static_cast<std::size_t>(a) * width + v;
                const double mx = grid.mass[cell];
                if (mx <= 0.0) continue;
                const GridPoint self{T + v, a};
                const std::int64_t own = static_cast<std::int64_t>(self.value) * T;

                double accepted = 0.0;
                double shortfall = 0.0;
                for (std::int32_t b = 0; b < T; ++b) {
                    const auto r = rel.range(self, b);
                    if (r.empty()) continue;
                    const double* pm = &pre_mass[static_cast<std::size_t>(b) * (width + 1)];
                    const double* pv = &pre_value[static_cast<std::size_t>(b) * (width + 1)];
                    accepted += pm[r.hi + 1] - pm[r.lo];

                    // Loss is positive while partner value * remaining < own value * T.
                    const std::int64_t remaining = T - std::max(a, b);
                    const std::int64_t cut = (own - 1) / remaining - T;  // last offset with positive loss
                    const std::int32_t hi = static_cast<std::int32_t>(std::min<std::int64_t>(r.hi, cut));
                    if (hi < r.lo) continue;
                    const double mass_in = pm[hi + 1] - pm[r.lo];
                    const double value_in = pv[hi + 1] - pv[r.lo];
                    shortfall += static_cast<double>(own) * mass_in - static_cast<double>(remaining) * value_in;
                }
                const double frac = std::min(1.0, accepted / M);
                removed[cell] = mx * frac;
                matched += mx * frac;
                loss += mx * shortfall / M;
            }
        }
        for (std::size_t i = 0; i < grid.mass.size(); ++i) grid.mass[i] = std::max(0.0, grid.mass[i] - removed[i]);
    }

    double aged = 0.0;
    const std::size_t last = (width - 1) * width;
    for (std::size_t v = 0; v < width; ++v) {
        const double m = grid.mass[last + v];
        aged += m;
        loss += m * static_cast<double>(T + static_cast<std::int32_t>(v)) * T;
    }
    std::copy_backward(grid.mass.begin(), grid.mass.begin() + static_cast<std::ptrdiff_t>(last), grid.mass.end());
    std::fill(grid.mass.begin(), grid.mass.begin() + static_cast<std::ptrdiff_t>(width), 0.0);
    ++grid.step;

    flow.matched_mass = 2.0 * matched;
    flow.aged_out_mass = 2.0 * aged;
    flow.loss_added = 2.0 * loss;
    return flow;
}

ContinuumSummary continuum_run(const ContinuumConfig& config) {
    std::unique_ptr<StripPartition> part;
    if (config.strategy == StrategyKind::ModifiedReasonable)
        part = std::make_unique<StripPartition>(build_partition(config.T));
    return continuum_run(config, AcceptanceRelation::build(config.strategy, part.get(), config.T));
}

ContinuumSummary continuum_run(const ContinuumConfig& config, const AcceptanceRelation& rel) {
    if (config.steps < 1) throw InvalidParameter("steps must be >= 1");
    if (config.n < 0.0) throw InvalidParameter("n must be >= 0");
    if (rel.strategy() != config.strategy) throw InvalidParameter("acceptance relation built for another strategy");

    ContinuumSummary out;
    out.config = config;
    out.series.reserve(static_cast<std::size_t>(config.steps));

    DensityGrid grid = continuum_init(config.T);
    double pop_sum = 0.0, loss_sum = 0.0, dep_sum = 0.0;
    double pop_late = 0.0, loss_late = 0.0, dep_late = 0.0;
    std::int64_t late_steps = 0;
    std::int64_t quiet = 0;
    double previous = 0.0;

    for (std::int64_t s = 0; s < config.steps; ++s) {
        const FlowReport flow = continuum_step(grid, rel, config.n);
        out.series.push_back(flow);

        const double departed = flow.matched_mass + flow.aged_out_mass;
        pop_sum += flow.population_after_entry;
        loss_sum += flow.loss_added;
        dep_sum += departed;
        if (s >= config.T) {
            pop_late += flow.population_after_entry;
            loss_late += flow.loss_added;
            dep_late += departed;
            ++late_steps;
        }

        const double p = flow.population_after_entry;
        const bool still = s > 0 && p > 0.0 && std::abs(p - previous) / p < kConvergenceTolerance;
        quiet = still ? quiet + 1 : 0;
        if (!out.converged && quiet >= config.T) {
            out.converged = true;
            out.convergence_step = s - quiet + 1;
        }
        previous = p;
    }

    const auto steps = static_cast<double>(config.steps);
    out.avg_population = pop_sum / steps;
    if (dep_sum > 0.0) out.avg_loss = loss_sum / dep_sum;
    if (late_steps > 0) out.avg_population_after_burn_in = pop_late / static_cast<double>(late_steps);
    if (dep_late > 0.0) out.avg_loss_after_burn_in = loss_late / dep_late;
    const FlowReport& last = out.series.back();
    out.final_population = last.population_after_entry;
    const double last_departed = last.matched_mass + last.aged_out_mass;
    if (last_departed > 0.0) out.final_loss = last.loss_added / last_departed;
    return out;
}

}  // namespace matchsim
