#include "avdz/errors.hpp"
#include "avdz/pquant.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace avdz;

namespace {

/// Every coefficient of band b gets magnitude sqrt(energy[b]).
RealMap map_with_band_energies(const std::array<double, kBandCount>& energy) {
    RealMap m;
    for (const Band& band : layout().bands)
        for (int id : band.leaves)
            for (double& c : m.leaf(id)) c = std::sqrt(energy[band.number - 1]);
    return m;
}

int narrow_count() {
    int n = 0;
    for (int b = 3; b <= 16; ++b) n += layout().bands[b - 1].count;
    return n;
}

} // namespace

TEST_CASE("I-Factor examples") {
    const std::vector<double> zero(8, 0.0);
    CHECK(i_factor(zero, 0.04) == 0.0);
    const std::vector<double> unit(8, 1.0);
    CHECK(i_factor(unit, 0.04) == 1.0);
    CHECK(i_factor(unit, 0.7) == 1.0);
    const std::vector<double> half(16, 0.5);
    // Arbitrary-precision value of 0.25^0.04.
    CHECK(std::abs(i_factor(half, 0.04) - 0.946057646725595907505) < 1e-14);
    CHECK_THROWS_AS(mean_energy(std::vector<double>{}), ConfigError);
}

TEST_CASE("band energies are joint over member leaves") {
    RealMap m;
    // Band 14 = leaves 14 and 15, 16 coefficients each.
    for (double& c : m.leaf(13)) c = 1.0;
    const auto e = band_energies(m);
    CHECK(e[13] == doctest::Approx(0.5));
    CHECK(e[12] == 0.0);
}

TEST_CASE("wide and narrow band classes") {
    for (int b = 1; b <= kBandCount; ++b) CHECK(is_wide_band(b) == (b <= 2 || b >= 17));
    CHECK(wide_reduction(1) == 2);
    CHECK(wide_reduction(2) == 1);
    CHECK(wide_reduction(17) == 1);
    CHECK(wide_reduction(18) == 3);
    CHECK(wide_reduction(19) == 2);
    CHECK(wide_reduction(9) == 0);
}

TEST_CASE("equal band energies allocate base 7 with wide reductions") {
    std::array<double, kBandCount> e{};
    e.fill(0.015);  // narrow mean between e1 and e3: no adjustment
    const BitAllocation a = allocate_bits(map_with_band_energies(e), PquantParams{});
    CHECK(a.bits[0] == 5);
    CHECK(a.bits[1] == 6);
    CHECK(a.bits[16] == 6);
    CHECK(a.bits[17] == 4);
    CHECK(a.bits[18] == 5);
    for (int b = 3; b <= 16; ++b) CHECK(a.bits[b - 1] == 7);
}

TEST_CASE("quiet narrow region adds a bit to quiet narrow bands") {
    // Band 5 at 0.001, every other band at X so the narrow mean is 0.005.
    const int n = narrow_count();
    const int c5 = layout().bands[4].count;
    const double x = (0.005 * n - 0.001 * c5) / (n - c5);
    std::array<double, kBandCount> e{};
    e.fill(x);
    e[4] = 0.001;
    const RealMap m = map_with_band_energies(e);
    const auto be = band_energies(m);
    double narrow = 0.0;
    for (int b = 3; b <= 16; ++b) narrow += be[b - 1] * layout().bands[b - 1].count;
    CHECK(narrow / n == doctest::Approx(0.005));

    const BitAllocation a = allocate_bits(m, PquantParams{});
    CHECK(a.bits[4] == 7);  // base 6, +1 by the quiet-region rule
    for (int b = 3; b <= 16; ++b)
        if (b != 5) CHECK(a.bits[b - 1] == 7);
}

TEST_CASE("loud narrow region removes a bit from loud narrow bands") {
    // Band 10 at 0.05, every other band at X so the narrow mean is 0.03.
    const int n = narrow_count();
    const int c10 = layout().bands[9].count;
    const double x = (0.03 * n - 0.05 * c10) / (n - c10);
    REQUIRE(x < 0.04);
    std::array<double, kBandCount> e{};
    e.fill(x);
    e[9] = 0.05;
    const BitAllocation a = allocate_bits(map_with_band_energies(e), PquantParams{});
    CHECK(a.bits[9] == 6);  // base 7, -1 by the loud-region rule
    for (int b = 3; b <= 16; ++b)
        if (b != 10) CHECK(a.bits[b - 1] == 6);
    CHECK(a.bits[0] == 4);
    CHECK(a.bits[17] == 3);
}

TEST_CASE("allocations from random frames stay in the coded ranges") {
    std::mt19937 g(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 300; ++t) {
        RealMap m;
        for (int id = 0; id < kLeafCount; ++id) {
            const double s = std::pow(10.0, -4.0 * u(g));
            for (double& c : m.leaf(id)) c = u(g) < 0.1 ? 0.0 : nd(g) * s;
        }
        const BitAllocation a = allocate_bits(m, PquantParams{});
        CHECK(is_perceptual_allocation(a));
        CHECK(alloc_from_side_code(alloc_side_code(a)) == a);
    }
    CHECK(is_perceptual_allocation(allocate_bits(RealMap{}, PquantParams{})));
}

TEST_CASE("quantizer mapping") {
    BitAllocation a = uniform_allocation(7);
    RealMap m;
    m.at(3, 0) = 0.5;
    m.at(3, 1) = -0.5;
    m.at(3, 2) = 1.0;
    m.at(3, 3) = 1.0 / 128.0;   // exactly half a step: rounds away from zero
    m.at(3, 4) = -1.0 / 128.0;
    const Quantized q = quantize(m, a);
    CHECK(q.map.at(3, 0) == 32);
    CHECK(q.map.at(3, 1) == -32);
    CHECK(q.map.at(3, 2) == 63);
    CHECK(q.map.at(3, 3) == 1);
    CHECK(q.map.at(3, 4) == -1);
    CHECK(q.map.at(0, 0) == 0);
    CHECK(q.clipped == 1);
    const RealMap d = dequantize(q.map, a);
    CHECK(d.at(3, 0) == 0.5);
    CHECK(d.at(0, 0) == 0.0);
}

TEST_CASE("quantizer error is bounded by half a step") {
    std::mt19937 g(19);
    std::uniform_real_distribution<double> u(-0.99, 0.99);
    std::uniform_int_distribution<std::uint64_t> code(0, (std::uint64_t{1} << 33) - 1);
    for (int t = 0; t < 50; ++t) {
        const BitAllocation a = alloc_from_side_code(code(g));
        RealMap m;
        for (double& c : m.flat()) c = u(g);
        const Quantized q = quantize(m, a);
        const RealMap d = dequantize(q.map, a);
        for (int id = 0; id < kLeafCount; ++id) {
            const int b = a.for_leaf(id);
            const double limit = std::ldexp(1.0, b - 1) - 1.0;
            for (int j = 0; j < layout().leaves[id].count; ++j) {
                if (std::abs(q.map.at(id, j)) == limit) continue;
                CHECK(std::abs(d.at(id, j) - m.at(id, j)) <= std::ldexp(1.0, -b) + 1e-15);
            }
        }
    }
}

TEST_CASE("side code table") {
    const BitAllocation base = alloc_from_side_code(0);
    CHECK(alloc_side_code(base) == 0);
    CHECK(base.bits[0] == 4);
    CHECK(base.bits[1] == 5);
    for (int b = 3; b <= 16; ++b) CHECK(base.bits[b - 1] == 6);
    CHECK(base.bits[16] == 5);
    CHECK(base.bits[17] == 3);
    CHECK(base.bits[18] == 4);

    // Band 3 is the first narrow band: bits 30..29 of the code.
    const auto band3 = [](std::uint64_t c) { return alloc_from_side_code(c << 29).bits[2]; };
    CHECK(band3(0b00) == 6);
    CHECK(band3(0b01) == 7);
    CHECK(band3(0b10) == 5);
    CHECK(band3(0b11) == 8);
    // Band 1 is the top bit.
    CHECK(alloc_from_side_code(std::uint64_t{1} << 32).bits[0] == 5);
}

TEST_CASE("side code round trips through the bit stream") {
    std::mt19937_64 g(23);
    for (int t = 0; t < 2000; ++t) {
        const std::uint64_t code = g() & ((std::uint64_t{1} << 33) - 1);
        const BitAllocation a = alloc_from_side_code(code);
        CHECK(alloc_side_code(a) == code);
        BitWriter w;
        encode_alloc_side_info(a, w);
        CHECK(w.size() == 33);
        const BitBuffer b = w.take();
        BitReader r(b);
        CHECK(decode_alloc_side_info(r) == a);
    }
}

TEST_CASE("truncated side information is a framing error") {
    BitWriter w;
    w.put_bits(0, 32);
    const BitBuffer b = w.take();
    BitReader r(b);
    CHECK_THROWS_AS(decode_alloc_side_info(r), FramingError);
}

TEST_CASE("unrepresentable allocations and parameters are rejected") {
    BitAllocation a = uniform_allocation(7);
    CHECK_THROWS_AS(alloc_side_code(a), ConfigError);  // band 18 at 7 bits
    PquantParams p;
    p.alpha = 0.0;
    CHECK_THROWS_AS(allocate_bits(RealMap{}, p), ConfigError);
    p = PquantParams{};
    p.e1 = 0.05;
    CHECK_THROWS_AS(allocate_bits(RealMap{}, p), ConfigError);
    CHECK_THROWS_AS(uniform_allocation(1), ConfigError);
}
