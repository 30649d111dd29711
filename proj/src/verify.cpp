#include "matchsim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "matchsim/geometry.hpp"
#include "matchsim/market.hpp"
#include "matchsim/oracles.hpp"
#include "matchsim/rng.hpp"

namespace matchsim {

namespace {

using oracles::Rational;

VerifyCheck match_probability_sweep() {
    int cases = 0, bad = 0;
    std::ostringstream detail;
    for (int m = 1; m <= 6; ++m)
        for (int w = 1; w <= 6; ++w)
            for (int k = 0; k <= w; ++k) {
                ++cases;
                if (oracles::exact_match_probability(m, w, k) != Rational(k, std::max(m, w))) {
                    if (bad++ == 0) detail << "first mismatch at m=" << m << " w=" << w << " k=" << k << "; ";
                }
            }
    detail << cases << " cases, " << bad << " mismatches";
    return {"match probability = k / max(m, w), m, w <= 6", bad == 0, detail.str()};
}

VerifyCheck cylinder_sweep() {
    int cases = 0, bad = 0;
    for (int m = 1; m <= 4; ++m)
        for (int w = 1; w <= 4; ++w)
            for (std::uint32_t a = 1; a < (1u << m); ++a)
                for (std::uint32_t b = 0; b < (1u << w); ++b) {
                    ++cases;
                    const auto r = oracles::cylinder_dependence_check(m, w, a, b);
                    if (!r.ok_x || !r.ok_complement) ++bad;
                }
    return {"negative cylinder dependence, m, w <= 4", bad == 0,
            std::to_string(cases) + " subset pairs, " + std::to_string(bad) + " violations"};
}

VerifyCheck strip_scan(Lifetime T) {
    const auto r = oracles::strip_pair_loss_scan(T);
    std::ostringstream detail;
    detail << r.pairs_scanned << " pairs, " << r.violations << " violations, worst loss/bound " << r.worst_margin;
    return {"per-match loss bound holds for every same-strip pair, T=" + std::to_string(T), r.violations == 0,
            detail.str()};
}

VerifyCheck acceptall_oracle() {
    bool ok = true;
    std::ostringstream detail;
    for (std::int64_t T : {4, 10, 37, 100}) {
        Rational sum = 0;
        for (std::int64_t a = T; a < 2 * T; ++a)
            for (std::int64_t b = T; b < 2 * T; ++b) sum += std::max<std::int64_t>(0, (a - b) * T);
        sum /= T * T;
        const Rational closed = oracles::acceptall_expected_loss(T);
        if (sum != closed) ok = false;
        detail << "T=" << T << ": " << closed << "; ";
    }
    return {"accept-all expected loss = (T^2 - 1) / 6", ok, detail.str()};
}

VerifyCheck partition_exact(Lifetime T) {
    const StripPartition part = build_partition(T);
    std::vector<std::int64_t> cover(static_cast<std::size_t>(part.strip_count()), 0);
    bool ok = true;
    // every diagonal reachable from the box sits in exactly one strip range
    for (std::int32_t d = 2 - T; d < 2 * T; ++d) {
        int owners = 0;
        for (std::int32_t f = 0; f < part.strip_count(); ++f) {
            const auto [lo, hi] = part.diag_range(part.from_flat(f));
            if (d >= lo && d < hi) ++owners;
        }
        if (owners != 1) ok = false;
    }
    std::int64_t points = 0;
    for (std::int32_t v = T; v < 2 * T; ++v)
        for (std::int32_t a = 0; a < T; ++a) {
            const GridPoint p{v, a};
            const std::int32_t f = part.flat_index(p);
            const auto [lo, hi] = part.diag_range(part.from_flat(f));
            if (diag_coord(p) < lo || diag_coord(p) >= hi) ok = false;
            ++cover[static_cast<std::size_t>(f)];
            ++points;
        }
    std::int64_t heights = 0;
    for (auto h : part.type2_heights()) heights += h;
    if (heights != T || points != static_cast<std::int64_t>(T) * T) ok = false;
    // only a bottom strip clipped to height 1 may be empty
    for (std::size_t f = 0; f < cover.size(); ++f) {
        const bool clipped = f + 1 == cover.size() && part.type2_heights().back() == 1;
        if ((cover[f] == 0) != clipped) ok = false;
    }
    return {"strip partition covers the box exactly, T=" + std::to_string(T), ok,
            std::to_string(part.strip_count()) + " strips, " + std::to_string(points) + " points"};
}

VerifyCheck pairing_frequencies(int m, int w, std::int64_t samples, std::uint64_t seed) {
    const oracles::PairingUniverse universe(m, w);
    std::map<std::vector<int>, std::int64_t> counts;
    for (const auto& p : universe.pairings()) counts[p] = 0;
    SplitMix64 rng(seed);
    bool ok = true;
    for (std::int64_t s = 0; s < samples; ++s) {
        std::vector<int> partner(static_cast<std::size_t>(m), -1);
        for (auto [i, j] : random_pairing(static_cast<std::size_t>(m), static_cast<std::size_t>(w), rng))
            partner[i] = static_cast<int>(j);
        const auto it = counts.find(partner);
        if (it == counts.end()) {
            ok = false;  // not a maximal pairing
            continue;
        }
        ++it->second;
    }
    const double p = 1.0 / static_cast<double>(universe.pairings().size());
    const double expect = p * static_cast<double>(samples);
    const double sigma = std::sqrt(static_cast<double>(samples) * p * (1.0 - p));
    double worst = 0.0;
    for (const auto& [_, c] : counts) worst = std::max(worst, std::abs(static_cast<double>(c) - expect) / sigma);
    if (worst > 3.0) ok = false;
    std::ostringstream detail;
    detail << universe.pairings().size() << " pairings, worst deviation " << worst << " sigma";
    return {"engine pairing is uniform, m=" + std::to_string(m) + " w=" + std::to_string(w), ok, detail.str()};
}

}  // namespace

std::vector<VerifyCheck> run_verification(const VerifyOptions& options) {
    std::vector<VerifyCheck> out;
    out.push_back(match_probability_sweep());
    out.push_back(cylinder_sweep());
    for (Lifetime T : options.scan_lifetimes) out.push_back(strip_scan(T));
    out.push_back(acceptall_oracle());
    for (Lifetime T : options.partition_lifetimes) out.push_back(partition_exact(T));
    const std::pair<int, int> sizes[] = {{1, 3}, {2, 2}, {3, 2}, {2, 4}, {3, 3}};
    for (std::size_t i = 0; i < std::size(sizes); ++i)
        out.push_back(pairing_frequencies(sizes[i].first, sizes[i].second, options.pairing_samples, options.seed + i));
    return out;
}

}  // namespace matchsim
