#pragma once

#include "avdz/bitio.hpp"
#include "avdz/subband.hpp"

#include <ostream>
#include <span>
#include <vector>

namespace avdz {

/// Top-to-bottom placement of leaves (0-based leaf ids) in the time-frequency map.
using RowOrder = std::vector<int>;

/// Coefficient j (0-based) of the row at position `row` (0-based) in a RowOrder.
/// Its time span is [j / L, (j + 1) / L) of the frame.
struct Coord {
    int row;
    int index;
    friend bool operator==(const Coord&, const Coord&) = default;
};

std::vector<int> row_lengths(std::span<const int> rows);

/// True iff cand sits in a row below parent's, that row is strictly longer,
/// and cand's time span is inside parent's. Throws std::out_of_range on bad coordinates.
bool is_descendant(std::span<const int> lengths, Coord parent, Coord cand);

/// True iff the span of (row_b, b) lies within the span of (row_a, a) given their lengths.
inline bool span_contains(int len_a, int a, int len_b, int b) {
    return static_cast<long>(a) * len_b <= static_cast<long>(b) * len_a &&
           static_cast<long>(b + 1) * len_a <= static_cast<long>(a + 1) * len_b;
}

struct Ordering {
    RowOrder rows;                 // all 26 leaves
    std::vector<int> transmitted;  // leaves with non-zero average magnitude, in order
};

/// Rows sorted by descending average magnitude, ties by ascending leaf id;
/// all-zero leaves follow in ascending id order and are not transmitted.
Ordering order_by_avg_magnitude(const IntMap& map);

/// Rebuilds the full row order from the transmitted prefix.
RowOrder full_order(std::span<const int> transmitted);

/// 5-bit leaf numbers (1..26) followed by the 5-bit zero terminator.
void encode_ordering(std::span<const int> transmitted, BitWriter& out);
std::vector<int> decode_ordering(BitReader& in);
inline std::size_t ordering_bits(std::size_t transmitted) { return 5 * (transmitted + 1); }

/// Stable sort by ascending leaf length (the length-relocated baseline layout).
RowOrder relocate_by_length(std::span<const int> rows);

/// Moves the first row of minimal length to the top; rows above it shift down one.
RowOrder avdz_relocate(std::span<const int> rows);

/// CSV debug dump: row,leaf_index,length,avg_magnitude
void dump_rows_csv(std::ostream& os, std::span<const int> rows, const IntMap& map);

} // namespace avdz
