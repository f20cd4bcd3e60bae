#pragma once

#include "avdz/zerotree.hpp"

#include <span>
#include <vector>

namespace avdz {

enum class SpihtVariant { Baseline, Ordered, ModifiedO, Merged };

/// S_n over a set of magnitudes: 1 iff some member is >= 2^n.
bool significance(std::span<const int> magnitudes, int n);

/// Spatial orientation trees over a row order, rooted at row 0. Scanning
/// down, each reachable row claims its offspring rows among the strictly
/// longer rows below it: the nearest one, or with `widened` the next 3 below
/// row 0 and the next 2 below any other row. A row already claimed stays with
/// its first claimant. Unclaimed rows are coded standalone in the LIP.
struct SpihtForest {
    RowGeometry geo;
    std::vector<int> parent_row;               // -1 for row 0 and standalone rows
    std::vector<std::vector<int>> children;    // O(i,j) as flat indices

    SpihtForest(std::span<const int> rows, bool widened);
};

Payload spiht_encode_rows(const IntMap& map, std::span<const int> rows, SpihtVariant variant);
RealMap spiht_decode_rows(const BitBuffer& payload, int last_step_level, std::span<const int> rows,
                          SpihtVariant variant);

/// Baseline codes all leaves length-relocated; the other variants code the
/// magnitude-ordered non-zero leaves.
Payload spiht_encode(const IntMap& map, SpihtVariant variant);
RealMap spiht_decode(const BitBuffer& payload, const SideInfo& side, SpihtVariant variant);

} // namespace avdz
