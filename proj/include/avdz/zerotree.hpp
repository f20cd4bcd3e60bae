#pragma once

#include "avdz/bitio.hpp"
#include "avdz/subband.hpp"
#include "avdz/tfmap.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <algorithm>
#include <vector>

namespace avdz {

/// Output of a zero-tree re-encoder for one frame.
struct Payload {
    BitBuffer bits;
    int last_step_level = 0;               // n_init + 1, 0 for an all-zero map
    std::vector<std::size_t> pass_ends;    // bit offsets where each sorting/refinement pass ends
};

/// Side information a decoder needs besides the payload.
struct SideInfo {
    int last_step_level = 0;
    std::vector<int> ordering;  // transmitted leaf ids (ordered coders only)
};

/// Instrumentation shared by the coders.
struct CoderStats {
    std::size_t bits = 0;
    std::size_t list_ops = 0;
};

/// Largest representable last step level (4-bit header field).
inline constexpr int kMaxLastStepLevel = 15;

/// floor(log2(max|c|)) + 1, or 0 when every value is zero.
int last_step_level_for(std::span<const int> values);

/// Flat row-major view of a map in a given row order.
struct RowGeometry {
    std::vector<int> rows;
    std::vector<int> lengths;
    std::vector<int> offsets;
    int total = 0;

    explicit RowGeometry(std::span<const int> row_order);

    int size() const { return static_cast<int>(rows.size()); }
    int flat(int row, int j) const { return offsets[row] + j; }
    Coord coord(int flat_index) const;
};

std::vector<int> gather(const IntMap& map, const RowGeometry& geo);
RealMap scatter(const RowGeometry& geo, std::span<const double> values);

/// Decoder-side magnitude intervals. A coefficient found significant at
/// exponent n is known to lie in [2^n, 2^(n+1)); each refinement bit halves
/// the interval. Discovery reconstructs at 1.5 * 2^n; a refinement moves the
/// value only as far as needed to stay inside the new integer interval, so no
/// coefficient's error grows as bits arrive.
class Reconstruction {
public:
    explicit Reconstruction(int n) : lo_(n, 0.0), width_(n, 0.0), mag_(n, 0.0), negative_(n, 0) {}

    void discover(int idx, int exponent, bool negative) {
        lo_[idx] = static_cast<double>(1u << exponent);
        width_[idx] = lo_[idx];
        mag_[idx] = exponent == 0 ? 1.0 : 1.5 * lo_[idx];
        negative_[idx] = negative;
    }
    void refine(int idx, bool upper) {
        width_[idx] *= 0.5;
        if (upper) lo_[idx] += width_[idx];
        mag_[idx] = std::clamp(mag_[idx], lo_[idx], lo_[idx] + width_[idx] - 1.0);
    }
    double value(int idx) const { return negative_[idx] ? -mag_[idx] : mag_[idx]; }
    std::vector<double> values() const;

private:
    std::vector<double> lo_;
    std::vector<double> width_;
    std::vector<double> mag_;
    std::vector<std::uint8_t> negative_;
};

/// All 26 leaves in length-relocated order (the baseline coders' layout).
RowOrder baseline_rows();

/// Rows coded by the magnitude-ordered coders: transmitted (non-zero) leaves only.
RowOrder ordered_rows(const IntMap& map);

/// Rounds a fully decoded map to integers.
IntMap to_int_map(const RealMap& map);

} // namespace avdz
