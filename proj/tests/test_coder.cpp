#include "avdz/coder.hpp"
#include "avdz/zerotree.hpp"

#include "doctest.h"
#include "test_util.hpp"

#include <cmath>
#include <random>

using namespace avdz;

TEST_CASE("coder names and ids") {
    for (int id = 0; id < kCoderCount; ++id) {
        const CoderId c = *coder_from_id(id);
        CHECK(static_cast<int>(c) == id);
        CHECK(parse_coder(coder_name(c)) == c);
    }
    CHECK_FALSE(coder_from_id(7).has_value());
    CHECK_FALSE(parse_coder("huffman").has_value());
    CHECK(parse_coder("avdz") == CoderId::Avdz);
    CHECK(parse_coder("mezw") == CoderId::Mezw);
    CHECK(parse_coder("mspiht") == CoderId::Mspiht);
    CHECK_FALSE(uses_ordering(CoderId::Ezw));
    CHECK_FALSE(uses_ordering(CoderId::Spiht));
    CHECK(uses_ordering(CoderId::Mezw));
    CHECK(uses_ordering(CoderId::Avdz));
}

TEST_CASE("every coder is lossless on random maps") {
    std::mt19937 g(151);
    for (int t = 0; t < 100; ++t) {
        const IntMap m = t % 2 ? avdz::testing::random_int_map(g, 127, 0.3)
                               : avdz::testing::random_sparse_map(g, 127);
        for (int id = 0; id < kCoderCount; ++id) {
            const CoderId c = *coder_from_id(id);
            const Reencoded r = reencode(c, m);
            CHECK(r.side.ordering.empty() == (!uses_ordering(c) || r.side.last_step_level == 0 ||
                                              r.side.ordering.empty()));
            CHECK(to_int_map(redecode(c, r.payload.bits, r.side)) == m);
        }
    }
}

TEST_CASE("magnitudes beyond the 15-level range are rejected") {
    IntMap m;
    m.at(0, 0) = 1 << 15;
    CHECK_THROWS(reencode(CoderId::Avdz, m));
    m.at(0, 0) = (1 << 15) - 1;
    CHECK(reencode(CoderId::Avdz, m).side.last_step_level == 15);
}

TEST_CASE("reconstruction error never grows and ends exact") {
    for (int v = 1; v < 1 << 12; ++v) {
        int n = 0;
        while ((2 << n) <= v) ++n;
        Reconstruction rec(1);
        rec.discover(0, n, false);
        CHECK(rec.value(0) == (n == 0 ? 1.0 : 1.5 * (1 << n)));
        double err = std::abs(rec.value(0) - v);
        for (int k = n - 1; k >= 0; --k) {
            rec.refine(0, (v >> k) & 1);
            const double e = std::abs(rec.value(0) - v);
            CHECK(e <= err);
            err = e;
        }
        CHECK(rec.value(0) == v);
    }
}

TEST_CASE("reconstruction moves only as far as the new interval requires") {
    Reconstruction rec(2);
    rec.discover(0, 2, false);  // [4, 8) -> 6
    rec.refine(0, true);        // [6, 8): 6 already inside
    CHECK(rec.value(0) == 6.0);
    rec.refine(0, true);        // [7, 8)
    CHECK(rec.value(0) == 7.0);
    rec.discover(1, 2, true);
    rec.refine(1, false);  // [4, 6) -> 5
    CHECK(rec.value(1) == -5.0);
}
