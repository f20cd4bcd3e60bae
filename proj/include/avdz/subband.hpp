#pragma once

#include "avdz/filterbank.hpp"

#include <array>
#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

namespace avdz {

inline constexpr int kSampleRate = 16000;
inline constexpr int kFrameSize = 512;
inline constexpr int kLeafCount = 26;
inline constexpr int kBandCount = 19;

/// One terminal node of the wavelet-packet tree. Leaf ids are 0-based in
/// containers; `number` is the 1-based id used in side information and dumps.
struct Leaf {
    int number;
    int low_hz;
    int high_hz;
    int depth;
    int count;   // kFrameSize >> depth
    int band;    // 1-based critical band
    int offset;  // start in the flat coefficient array
};

struct Band {
    int number;
    int low_hz;
    int high_hz;
    std::vector<int> leaves;  // 0-based leaf ids
    int count;                // total coefficients
};

struct SubbandLayout {
    std::array<Leaf, kLeafCount> leaves;
    std::array<Band, kBandCount> bands;
};

/// The fixed 19-band / 26-leaf decomposition of a 512-sample frame at 16 kHz.
SubbandLayout make_layout();
const SubbandLayout& layout();

/// CSV: leaf_index,low_Hz,high_Hz,depth,count
void dump_layout_csv(std::ostream& os, const SubbandLayout& lay);

/// Per-frame coefficients c(i, j), stored flat in leaf order (ascending frequency).
template <typename T>
class CoefficientMap {
public:
    CoefficientMap() : values_(kFrameSize, T{}) {}
    explicit CoefficientMap(std::vector<T> flat) : values_(std::move(flat)) {}

    std::span<T> leaf(int id) {
        const Leaf& l = layout().leaves[id];
        return {values_.data() + l.offset, static_cast<std::size_t>(l.count)};
    }
    std::span<const T> leaf(int id) const {
        const Leaf& l = layout().leaves[id];
        return {values_.data() + l.offset, static_cast<std::size_t>(l.count)};
    }
    T& at(int id, int j) { return values_[layout().leaves[id].offset + j]; }
    const T& at(int id, int j) const { return values_[layout().leaves[id].offset + j]; }

    std::span<T> flat() { return values_; }
    std::span<const T> flat() const { return values_; }

    friend bool operator==(const CoefficientMap&, const CoefficientMap&) = default;

private:
    std::vector<T> values_;
};

using RealMap = CoefficientMap<double>;
using IntMap = CoefficientMap<int>;

/// Wavelet-packet analysis down to every leaf of the layout. Leaves come out
/// in ascending-frequency order (Gray-code reordering of the natural order).
RealMap analyze(std::span<const double> frame, const FilterQuadruple& q);

/// Inverse of analyze.
std::vector<double> synthesize(const RealMap& map, const FilterQuadruple& q);

} // namespace avdz
