#pragma once

#include "avdz/zerotree.hpp"

#include <span>

namespace avdz {

/// Depth side information: 01/10/11 for 1..3, 00 + 3 bits for 4..10,
/// 00 + 000 + 4 bits for 11..25.
void encode_depth(int depth, BitWriter& out);
int decode_depth(BitReader& in);
int depth_code_length(int depth);

/// Row order used by the coder: magnitude-ordered non-zero leaves with the
/// first shortest one moved to the top.
RowOrder avdz_rows(std::span<const int> transmitted);

/// Codes the map with one tree per coefficient of the top row. Each tree
/// keeps a degree k (the last row opened so far) that only grows.
Payload avdz_encode_rows(const IntMap& map, std::span<const int> rows, CoderStats* stats = nullptr);
RealMap avdz_decode_rows(const BitBuffer& payload, int last_step_level, std::span<const int> rows,
                         CoderStats* stats = nullptr);

Payload avdz_encode(const IntMap& map);
RealMap avdz_decode(const BitBuffer& payload, const SideInfo& side);

} // namespace avdz
