#include "matchsim/oracles.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "matchsim/metrics.hpp"
#include "matchsim/strategy.hpp"

namespace matchsim::oracles {

namespace {

void check_side(int side, int cap) {
    if (side < 0 || side > cap)
        throw InvalidParameter("pool side " + std::to_string(side) + " outside enumeration bound 0.." +
                               std::to_string(cap));
}

// All injections of {0..k-1} into {0..n-1}, depth first.
void injections(int k, int n, std::vector<int>& cur, std::vector<char>& used, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == k) {
        out.push_back(cur);
        return;
    }
    for (int j = 0; j < n; ++j) {
        if (used[j]) continue;
        used[j] = 1;
        cur.push_back(j);
        injections(k, n, cur, used, out);
        cur.pop_back();
        used[j] = 0;
    }
}

}  // namespace

PairingUniverse::PairingUniverse(int men, int women) : men_(men), women_(women) {
    check_side(men, kMaxPairingSide);
    check_side(women, kMaxPairingSide);

    const int small = std::min(men, women);
    const int large = std::max(men, women);
    std::vector<std::vector<int>> raw;
    std::vector<int> cur;
    std::vector<char> used(static_cast<std::size_t>(large), 0);
    injections(small, large, cur, used, raw);

    pairings_.reserve(raw.size());
    for (const auto& inj : raw) {
        std::vector<int> partner(static_cast<std::size_t>(men), -1);
        if (men <= women) {
            for (int i = 0; i < men; ++i) partner[i] = inj[i];
        } else {
            for (int j = 0; j < women; ++j) partner[inj[j]] = j;
        }
        pairings_.push_back(std::move(partner));
    }
}

std::uint64_t PairingUniverse::expected_count(int men, int women) {
    const int small = std::min(men, women);
    const int large = std::max(men, women);
    std::uint64_t count = 1;
    for (int i = 0; i < small; ++i) count *= static_cast<std::uint64_t>(large - i);
    return count;
}

Rational exact_match_probability(int men, int women, int acceptable) {
    if (men < 1) throw InvalidParameter("need at least the distinguished man");
    if (acceptable < 0 || acceptable > women) throw InvalidParameter("acceptable count must lie in 0..women");
    const PairingUniverse universe(men, women);
    std::int64_t hits = 0;
    for (const auto& p : universe.pairings())
        if (p[0] >= 0 && p[0] < acceptable) ++hits;
    return Rational(hits, static_cast<std::int64_t>(universe.pairings().size()));
}

CylinderReport cylinder_dependence_check(int men, int women, std::uint32_t men_subset, std::uint32_t women_subset) {
    check_side(men, kMaxCylinderSide);
    check_side(women, kMaxCylinderSide);
    if (men_subset >> men || women_subset >> women) throw InvalidParameter("subset mask exceeds pool");

    const PairingUniverse universe(men, women);
    const auto total = static_cast<std::int64_t>(universe.pairings().size());

    std::vector<int> chosen;
    for (int i = 0; i < men; ++i)
        if (men_subset >> i & 1u) chosen.push_back(i);

    auto in_b = [&](int partner) { return partner >= 0 && (women_subset >> partner & 1u); };

    std::int64_t all_in = 0, all_out = 0;
    std::vector<std::int64_t> hit(chosen.size(), 0);
    for (const auto& p : universe.pairings()) {
        bool every_in = true, every_out = true;
        for (std::size_t k = 0; k < chosen.size(); ++k) {
            const bool x = in_b(p[chosen[k]]);
            hit[k] += x;
            every_in = every_in && x;
            every_out = every_out && !x;
        }
        all_in += every_in;
        all_out += every_out;
    }

    CylinderReport r;
    r.e_prod = Rational(all_in, total);
    r.e_prod_complement = Rational(all_out, total);
    r.prod_e = 1;
    r.prod_e_complement = 1;
    for (std::int64_t h : hit) {
        r.prod_e *= Rational(h, total);
        r.prod_e_complement *= Rational(total - h, total);
    }
    r.ok_x = r.e_prod <= r.prod_e;
    r.ok_complement = r.e_prod_complement <= r.prod_e_complement;
    return r;
}

Rational acceptall_expected_loss(std::int64_t T) {
    if (T < 1) throw InvalidParameter("T must be >= 1");
    return Rational(T * T - 1, 6);
}

StripScanReport strip_pair_loss_scan(Lifetime T) {
    const StripPartition part = build_partition(T);

    std::vector<std::vector<GridPoint>> members(static_cast<std::size_t>(part.strip_count()));
    for (std::int32_t a = 0; a < T; ++a)
        for (std::int32_t v = T; v < 2 * T; ++v) members[static_cast<std::size_t>(part.flat_index({v, a}))].push_back({v, a});

    StripScanReport out;
    for (const auto& strip : members) {
        for (const GridPoint self : strip) {
            const double bound = match_loss_bound(self.age, T);
            const double scaled = match_loss_bound_age_scaled(self.age, T);
            for (const GridPoint partner : strip) {
                const auto loss = static_cast<double>(match_loss(self, partner, T));
                ++out.pairs_scanned;
                if (loss > bound) ++out.violations;
                if (loss > scaled) ++out.age_scaled_violations;
                const double margin = loss / bound;
                if (margin > out.worst_margin) {
                    out.worst_margin = margin;
                    out.worst_self = self;
                    out.worst_partner = partner;
                }
            }
        }
    }
    return out;
}

}  // namespace matchsim::oracles
