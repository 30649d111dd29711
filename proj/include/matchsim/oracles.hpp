#pragma once

// Brute-force ground truth for small instances: random pairings enumerated
// exhaustively, exact rational probabilities, and an exhaustive scan of the
// per-match loss bound over all same-strip grid-point pairs.

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "matchsim/geometry.hpp"

namespace matchsim::oracles {

using Rational = boost::multiprecision::cpp_rational;

/// Pool sizes above this are refused by the enumerators.
inline constexpr int kMaxPairingSide = 8;
inline constexpr int kMaxCylinderSide = 7;

/// Every maximal pairing between m men and w women: injections of the smaller
/// side into the larger. Stored man-major: partner_of_man[i] is a woman index
/// or -1 when man i is left out.
class PairingUniverse {
public:
    PairingUniverse(int men, int women);

    int men() const noexcept { return men_; }
    int women() const noexcept { return women_; }
    const std::vector<std::vector<int>>& pairings() const noexcept { return pairings_; }

    /// max(m,w)! / (max(m,w) - min(m,w))!
    static std::uint64_t expected_count(int men, int women);

private:
    int men_;
    int women_;
    std::vector<std::vector<int>> pairings_;
};

/// Probability that man 0 is paired with one of women 0..acceptable-1, all of
/// whom accept him. Equals acceptable / max(m, w).
Rational exact_match_probability(int men, int women, int acceptable);

struct CylinderReport {
    Rational e_prod;             // E[prod X_i]
    Rational prod_e;             // prod E[X_i]
    Rational e_prod_complement;  // E[prod (1 - X_i)]
    Rational prod_e_complement;  // prod E[1 - X_i]
    bool ok_x = false;           // e_prod <= prod_e
    bool ok_complement = false;  // e_prod_complement <= prod_e_complement
};

/// X_i = 1 iff the i-th man of `men_subset` is paired into `women_subset`.
/// Subsets are bit masks over men 0..m-1 and women 0..w-1.
CylinderReport cylinder_dependence_check(int men, int women, std::uint32_t men_subset, std::uint32_t women_subset);

/// T * E[(V1 - V2)^+] for independent uniform values on T consecutive
/// integers: (T^2 - 1) / 6.
Rational acceptall_expected_loss(std::int64_t T);

struct StripScanReport {
    std::int64_t pairs_scanned = 0;  // ordered (self, partner) pairs
    std::int64_t violations = 0;     // loss > 4 T age + 2 T sqrt(T)
    std::int64_t age_scaled_violations = 0;
    double worst_margin = 0.0;  // max loss / bound
    GridPoint worst_self;
    GridPoint worst_partner;
};

/// For every ordered pair of grid points sharing a strip, the loss `self` would
/// take from matching `partner` against the bound for self's age.
StripScanReport strip_pair_loss_scan(Lifetime T);

}  // namespace matchsim::oracles
