#pragma once

#include "avdz/bitio.hpp"
#include "avdz/subband.hpp"

#include <array>
#include <cstdint>
#include <span>

namespace avdz {

struct PquantParams {
    double alpha = 0.04;  // I-Factor exponent
    double e1 = 0.01;     // narrow-region energy below which quiet bands gain a bit
    double e2 = 0.004;
    double e3 = 0.02;     // narrow-region energy above which loud bands lose a bit
    double e4 = 0.04;

    void validate() const;
};

/// Wide bands (1, 2, 17, 18, 19) carry a 1-bit side code, narrow bands (3..16) 2 bits.
bool is_wide_band(int band_number);

/// Bits removed from the 6/7-bit base allocation of each band (0 for narrow bands).
int wide_reduction(int band_number);

inline constexpr int kAllocSideInfoBits = 33;

struct BitAllocation {
    std::array<int, kBandCount> bits{};  // per band, sign bit included

    int for_leaf(int leaf_id) const { return bits[layout().leaves[leaf_id].band - 1]; }
    friend bool operator==(const BitAllocation&, const BitAllocation&) = default;
};

/// Mean squared magnitude of a coefficient set. Throws on an empty set.
double mean_energy(std::span<const double> coeffs);

/// Ebar^alpha, with 0^alpha taken as 0.
double i_factor(std::span<const double> coeffs, double alpha);

/// Per-band mean energies computed jointly over each band's member leaves.
std::array<double, kBandCount> band_energies(const RealMap& map);

BitAllocation allocate_bits(const RealMap& map, const PquantParams& params);

/// Every band at the same width (the 7-bit uniform reference quantizer).
BitAllocation uniform_allocation(int bits);

/// True if the allocation is one the perceptual rules can produce.
bool is_perceptual_allocation(const BitAllocation& alloc);

struct Quantized {
    IntMap map;
    int clipped = 0;  // coefficients saturated at +-(2^(b-1) - 1)
};

/// q = clamp(round(c * 2^(b-1)), -(2^(b-1)-1), 2^(b-1)-1), rounding half away from zero.
Quantized quantize(const RealMap& map, const BitAllocation& alloc);

/// c = q / 2^(b-1). Accepts fractional reconstructions from truncated streams.
RealMap dequantize(const RealMap& values, const BitAllocation& alloc);
RealMap dequantize(const IntMap& values, const BitAllocation& alloc);

/// 33-bit side code: bands 1..19 in order, 1 bit per wide band
/// (0 = from base 6, 1 = from base 7) and 2 bits per narrow band
/// (00 = 6, 01 = 7, 10 = 5, 11 = 8).
std::uint64_t alloc_side_code(const BitAllocation& alloc);
BitAllocation alloc_from_side_code(std::uint64_t code);

void encode_alloc_side_info(const BitAllocation& alloc, BitWriter& out);
/// Throws FramingError if fewer than 33 bits remain.
BitAllocation decode_alloc_side_info(BitReader& in);

} // namespace avdz
