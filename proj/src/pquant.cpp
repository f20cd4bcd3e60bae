#include "avdz/pquant.hpp"

#include "avdz/errors.hpp"

#include <algorithm>
#include <cmath>

namespace avdz {

namespace {

constexpr int kNarrowFirst = 3;
constexpr int kNarrowLast = 16;

// Narrow-band side codes indexed by code value.
constexpr std::array<int, 4> kNarrowCodeBits{6, 7, 5, 8};

int narrow_code(int bits) {
    for (int c = 0; c < 4; ++c)
        if (kNarrowCodeBits[c] == bits) return c;
    throw ConfigError("allocation outside the narrow-band range {5,6,7,8}");
}

int round_half_away(double v) {
    return static_cast<int>(v < 0.0 ? -std::floor(-v + 0.5) : std::floor(v + 0.5));
}

} // namespace

void PquantParams::validate() const {
    if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
    if (!(e1 > 0.0 && e2 > 0.0 && e3 > 0.0 && e4 > 0.0))
        throw ConfigError("energy thresholds must be positive");
    if (!(e1 < e3)) throw ConfigError("e1 must be below e3");
}

bool is_wide_band(int band_number) {
    return band_number < kNarrowFirst || band_number > kNarrowLast;
}

int wide_reduction(int band_number) {
    switch (band_number) {
    case 1: return 2;
    case 2: return 1;
    case 17: return 1;
    case 18: return 3;
    case 19: return 2;
    default: return 0;
    }
}

double mean_energy(std::span<const double> coeffs) {
    if (coeffs.empty()) throw ConfigError("mean_energy: empty coefficient set");
    double acc = 0.0;
    for (double c : coeffs) acc += c * c;
    return acc / static_cast<double>(coeffs.size());
}

double i_factor(std::span<const double> coeffs, double alpha) {
    if (!(alpha > 0.0)) throw ConfigError("i_factor: alpha must be positive");
    const double e = mean_energy(coeffs);
    return e == 0.0 ? 0.0 : std::pow(e, alpha);
}

std::array<double, kBandCount> band_energies(const RealMap& map) {
    std::array<double, kBandCount> out{};
    for (const Band& band : layout().bands) {
        double acc = 0.0;
        for (int id : band.leaves)
            for (double c : map.leaf(id)) acc += c * c;
        out[band.number - 1] = acc / band.count;
    }
    return out;
}

BitAllocation allocate_bits(const RealMap& map, const PquantParams& params) {
    params.validate();
    const auto energy = band_energies(map);

    std::array<double, kBandCount> ifac{};
    for (int b = 0; b < kBandCount; ++b)
        ifac[b] = energy[b] == 0.0 ? 0.0 : std::pow(energy[b], params.alpha);
    const auto [lo_it, hi_it] = std::minmax_element(ifac.begin(), ifac.end());
    const double lo = *lo_it, hi = *hi_it;
    const double mid = 0.5 * (lo + hi);
    // Equal energies can differ in the last bits after pow(); treat them as equal.
    const double tol = 1e-12 * hi;

    BitAllocation alloc;
    for (int b = 0; b < kBandCount; ++b) {
        const int base = (hi - lo <= tol || ifac[b] >= mid - tol) ? 7 : 6;
        alloc.bits[b] = base - wide_reduction(b + 1);
    }

    // Narrow-region energy over all of its coefficients.
    double narrow_sum = 0.0;
    int narrow_count = 0;
    for (int b = kNarrowFirst; b <= kNarrowLast; ++b) {
        const Band& band = layout().bands[b - 1];
        narrow_sum += energy[b - 1] * band.count;
        narrow_count += band.count;
    }
    const double narrow_energy = narrow_sum / narrow_count;

    if (narrow_energy < params.e1) {
        for (int b = kNarrowFirst; b <= kNarrowLast; ++b)
            if (energy[b - 1] < params.e2) alloc.bits[b - 1] += 1;
    } else if (narrow_energy > params.e3) {
        for (int b = kNarrowFirst; b <= kNarrowLast; ++b)
            if (energy[b - 1] > params.e4) alloc.bits[b - 1] -= 1;
    }
    return alloc;
}

BitAllocation uniform_allocation(int bits) {
    if (bits < 2 || bits > 16) throw ConfigError("uniform allocation needs 2..16 bits");
    BitAllocation a;
    a.bits.fill(bits);
    return a;
}

bool is_perceptual_allocation(const BitAllocation& alloc) {
    for (int b = 1; b <= kBandCount; ++b) {
        const int bits = alloc.bits[b - 1];
        if (is_wide_band(b)) {
            const int r = wide_reduction(b);
            if (bits != 6 - r && bits != 7 - r) return false;
        } else if (bits < 5 || bits > 8) {
            return false;
        }
    }
    return true;
}

Quantized quantize(const RealMap& map, const BitAllocation& alloc) {
    Quantized out;
    for (int id = 0; id < kLeafCount; ++id) {
        const int b = alloc.for_leaf(id);
        if (b < 2) throw ConfigError("quantize: at least 2 bits per band are required");
        const double scale = std::ldexp(1.0, b - 1);
        const int limit = (1 << (b - 1)) - 1;
        auto src = map.leaf(id);
        auto dst = out.map.leaf(id);
        for (std::size_t j = 0; j < src.size(); ++j) {
            int q = round_half_away(src[j] * scale);
            if (q > limit || q < -limit) {
                q = std::clamp(q, -limit, limit);
                ++out.clipped;
            }
            dst[j] = q;
        }
    }
    return out;
}

RealMap dequantize(const RealMap& values, const BitAllocation& alloc) {
    RealMap out;
    for (int id = 0; id < kLeafCount; ++id) {
        const double inv = std::ldexp(1.0, -(alloc.for_leaf(id) - 1));
        auto src = values.leaf(id);
        auto dst = out.leaf(id);
        for (std::size_t j = 0; j < src.size(); ++j) dst[j] = src[j] * inv;
    }
    return out;
}

RealMap dequantize(const IntMap& values, const BitAllocation& alloc) {
    RealMap real;
    std::transform(values.flat().begin(), values.flat().end(), real.flat().begin(),
                   [](int v) { return static_cast<double>(v); });
    return dequantize(real, alloc);
}

std::uint64_t alloc_side_code(const BitAllocation& alloc) {
    std::uint64_t code = 0;
    for (int b = 1; b <= kBandCount; ++b) {
        const int bits = alloc.bits[b - 1];
        if (is_wide_band(b)) {
            const int base = bits + wide_reduction(b);
            if (base != 6 && base != 7) throw ConfigError("allocation outside the wide-band range");
            code = (code << 1) | static_cast<std::uint64_t>(base == 7);
        } else {
            code = (code << 2) | static_cast<std::uint64_t>(narrow_code(bits));
        }
    }
    return code;
}

BitAllocation alloc_from_side_code(std::uint64_t code) {
    BitAllocation alloc;
    int shift = kAllocSideInfoBits;
    for (int b = 1; b <= kBandCount; ++b) {
        if (is_wide_band(b)) {
            shift -= 1;
            const int base = ((code >> shift) & 1u) ? 7 : 6;
            alloc.bits[b - 1] = base - wide_reduction(b);
        } else {
            shift -= 2;
            alloc.bits[b - 1] = kNarrowCodeBits[(code >> shift) & 3u];
        }
    }
    return alloc;
}

void encode_alloc_side_info(const BitAllocation& alloc, BitWriter& out) {
    const std::uint64_t code = alloc_side_code(alloc);
    out.put_bits(static_cast<std::uint32_t>(code >> 32), 1);
    out.put_bits(static_cast<std::uint32_t>(code & 0xFFFFFFFFu), 32);
}

BitAllocation decode_alloc_side_info(BitReader& in) {
    if (in.remaining() < static_cast<std::size_t>(kAllocSideInfoBits))
        throw FramingError("allocation side information truncated");
    const std::uint64_t hi = in.get_bits(1);
    const std::uint64_t lo = in.get_bits(32);
    return alloc_from_side_code((hi << 32) | lo);
}

} // namespace avdz
