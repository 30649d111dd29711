#include "doctest.h"

#include <cmath>
#include <vector>

#include "matchsim/geometry.hpp"

using namespace matchsim;

namespace {

// Reference partition built by walking the heights one diagonal at a time.
struct NaiveStrip {
    bool type1;
    int index;
};

std::vector<int> naive_heights(int T) {
    const int w = static_cast<int>(std::sqrt(static_cast<double>(T)));
    std::vector<int> hs;
    int left = T, next = w;
    for (int k = 0; left > 0; ++k) {
        int h = std::min(next, T / 2);
        h = std::min(h, left);
        hs.push_back(h);
        left -= h;
        if (k >= 1) next *= 2;
    }
    return hs;
}

NaiveStrip naive_strip(int T, int value, int age) {
    const int w = static_cast<int>(std::sqrt(static_cast<double>(T)));
    const int d = value - 2 * age;
    if (d >= T) {
        int i = (d - T) / w + 1;
        return {true, std::min(i, w)};
    }
    int upper = T, k = 0;
    for (int h : naive_heights(T)) {
        ++k;
        const int lower = upper - 2 * h;
        if (d >= lower) return {false, k};
        upper = lower;
    }
    return {false, -1};
}

}  // namespace

TEST_CASE("partition shapes for small lifetimes") {
    SUBCASE("T=16") {
        const auto p = build_partition(16);
        CHECK(p.width() == 4);
        CHECK(p.type2_heights() == std::vector<int>{4, 4, 8});
        CHECK(p.type2_count() == 3);
        CHECK(p.strip_count() == 7);
        CHECK(p.diag_boundaries() == std::vector<int>{16, 8, 0, -16});
        CHECK(p.type1_boundaries() == std::vector<int>{16, 20, 24, 28, 32});
    }
    SUBCASE("T=4") {
        const auto p = build_partition(4);
        CHECK(p.width() == 2);
        CHECK(p.type2_heights() == std::vector<int>{2, 2});
        CHECK(p.strip_count() == 4);
    }
    SUBCASE("T=100 clips the last height") {
        const auto p = build_partition(100);
        CHECK(p.width() == 10);
        CHECK(p.type2_heights() == std::vector<int>{10, 10, 20, 40, 20});
        CHECK(p.strip_count() == 15);
    }
    SUBCASE("heights agree with the naive builder") {
        for (int T = 4; T <= 400; ++T) CHECK(build_partition(T).type2_heights() == naive_heights(T));
    }
}

TEST_CASE("powers of four give a pure doubling sequence") {
    for (int T : {4, 16, 64, 256, 1024, 4096}) {
        const auto p = build_partition(T);
        const int w = p.width();
        std::vector<int> expect{w};
        for (int h = w; h <= T / 2; h *= 2) expect.push_back(h);
        CHECK(p.type2_heights() == expect);
        CHECK(p.type2_count() == static_cast<int>(std::log2(w)) + 1);
    }
}

TEST_CASE("lifetimes below four are rejected") {
    CHECK_THROWS_AS(build_partition(3), InvalidParameter);
    CHECK_THROWS_AS(build_partition(0), InvalidParameter);
}

TEST_CASE("diagonal coordinate and worth") {
    CHECK(diag_coord({16, 0}) == 16);
    CHECK(diag_coord({20, 6}) == 8);
    CHECK(diag_coord({16, 15}) == -14);
    CHECK(worth({16, 0}, 16) == 16 * 16);
    CHECK(worth({150, 40}, 100) == 150 * 60);
    CHECK(worth({199, 99}, 100) == 199);
}

TEST_CASE("strip lookup at T=16") {
    const auto p = build_partition(16);
    CHECK(p.strip_of({16, 0}) == StripId{StripKind::Type1, 1});
    CHECK(p.strip_of({31, 0}) == StripId{StripKind::Type1, 4});
    CHECK(p.strip_of({20, 6}) == StripId{StripKind::Type2, 1});
    CHECK(p.strip_of({16, 15}) == StripId{StripKind::Type2, 3});
    CHECK_THROWS_AS(p.strip_of({15, 0}), InvalidParameter);
    CHECK_THROWS_AS(p.strip_of({16, 16}), InvalidParameter);
}

TEST_CASE("every grid point lands in exactly the naive strip") {
    for (int T : {4, 5, 16, 17, 50, 64, 100, 101, 256}) {
        const auto p = build_partition(T);
        std::vector<long> count(static_cast<std::size_t>(p.strip_count()), 0);
        for (int v = T; v < 2 * T; ++v)
            for (int a = 0; a < T; ++a) {
                const StripId id = p.strip_of({v, a});
                const NaiveStrip ref = naive_strip(T, v, a);
                REQUIRE((id.kind == StripKind::Type1) == ref.type1);
                REQUIRE(id.index == ref.index);
                const int f = p.flat_index({v, a});
                REQUIRE(p.from_flat(f) == id);
                REQUIRE(p.flat_index(id) == f);
                const auto [lo, hi] = p.diag_range(id);
                REQUIRE(diag_coord({v, a}) >= lo);
                REQUIRE(diag_coord({v, a}) < hi);
                ++count[static_cast<std::size_t>(f)];
            }
        // A bottom strip clipped to height 1 covers d in [-T, 2-T): unreachable.
        for (int f = 0; f < p.strip_count(); ++f) {
            const bool clipped_bottom = f == p.strip_count() - 1 && p.type2_heights().back() == 1;
            CHECK((count[static_cast<std::size_t>(f)] == 0) == clipped_bottom);
        }
        CHECK(p.diag_boundaries().back() <= 2 - T);
    }
}

TEST_CASE("strip names") {
    CHECK(to_string(StripId{StripKind::Type1, 3}) == "type1#3");
    CHECK(to_string(StripId{StripKind::Type2, 1}) == "type2#1");
}
