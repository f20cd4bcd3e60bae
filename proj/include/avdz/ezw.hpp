#pragma once

#include "avdz/zerotree.hpp"

#include <span>
#include <vector>

namespace avdz {

enum class EzwVariant { Baseline, Modified };

enum class EzwSymbol { Pos, Neg, Iz, Ztr, Z };

struct EzwTraceEntry {
    int exponent;  // threshold is 2^exponent
    Coord coord;
    EzwSymbol symbol;
};

/// Dominant/subordinate coding of the map in the given row order. A node's
/// descendants are the time-contained coefficients of strictly longer rows below it.
Payload ezw_encode_rows(const IntMap& map, std::span<const int> rows,
                        std::vector<EzwTraceEntry>* trace = nullptr);

/// Mirror of ezw_encode_rows. A truncated payload yields the partial reconstruction.
RealMap ezw_decode_rows(const BitBuffer& payload, int last_step_level, std::span<const int> rows);

/// Baseline codes all leaves in length-relocated order; Modified codes the
/// magnitude-ordered non-zero leaves.
Payload ezw_encode(const IntMap& map, EzwVariant variant);
RealMap ezw_decode(const BitBuffer& payload, const SideInfo& side, EzwVariant variant);

} // namespace avdz
