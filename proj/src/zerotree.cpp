#include "avdz/zerotree.hpp"

#include "avdz/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>

namespace avdz {

int last_step_level_for(std::span<const int> values) {
    unsigned max_mag = 0;
    for (int v : values) max_mag = std::max(max_mag, static_cast<unsigned>(std::abs(v)));
    if (max_mag == 0) return 0;
    const int level = std::bit_width(max_mag);
    if (level > kMaxLastStepLevel) throw ConfigError("coefficient magnitude exceeds the 15-level range");
    return level;
}

RowGeometry::RowGeometry(std::span<const int> row_order)
    : rows(row_order.begin(), row_order.end()), lengths(row_lengths(row_order)) {
    offsets.resize(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        offsets[r] = total;
        total += lengths[r];
    }
}

Coord RowGeometry::coord(int flat_index) const {
    const auto it = std::upper_bound(offsets.begin(), offsets.end(), flat_index);
    const int row = static_cast<int>(it - offsets.begin()) - 1;
    return {row, flat_index - offsets[row]};
}

std::vector<int> gather(const IntMap& map, const RowGeometry& geo) {
    std::vector<int> out(geo.total);
    for (int r = 0; r < geo.size(); ++r) {
        auto src = map.leaf(geo.rows[r]);
        std::copy(src.begin(), src.end(), out.begin() + geo.offsets[r]);
    }
    return out;
}

RealMap scatter(const RowGeometry& geo, std::span<const double> values) {
    RealMap out;
    for (int r = 0; r < geo.size(); ++r) {
        auto dst = out.leaf(geo.rows[r]);
        std::copy_n(values.begin() + geo.offsets[r], dst.size(), dst.begin());
    }
    return out;
}

std::vector<double> Reconstruction::values() const {
    std::vector<double> out(lo_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = value(static_cast<int>(i));
    return out;
}

RowOrder baseline_rows() {
    RowOrder all(kLeafCount);
    for (int i = 0; i < kLeafCount; ++i) all[i] = i;
    return relocate_by_length(all);
}

RowOrder ordered_rows(const IntMap& map) { return order_by_avg_magnitude(map).transmitted; }

IntMap to_int_map(const RealMap& map) {
    IntMap out;
    std::transform(map.flat().begin(), map.flat().end(), out.flat().begin(),
                   [](double v) { return static_cast<int>(std::lround(v)); });
    return out;
}

} // namespace avdz
