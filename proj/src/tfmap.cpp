#include "avdz/tfmap.hpp"

#include "avdz/errors.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace avdz {

std::vector<int> row_lengths(std::span<const int> rows) {
    std::vector<int> out(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) out[r] = layout().leaves.at(rows[r]).count;
    return out;
}

bool is_descendant(std::span<const int> lengths, Coord parent, Coord cand) {
    const auto rows = static_cast<int>(lengths.size());
    if (parent.row < 0 || parent.row >= rows || cand.row < 0 || cand.row >= rows)
        throw std::out_of_range("is_descendant: row outside the map");
    if (parent.index < 0 || parent.index >= lengths[parent.row] || cand.index < 0 ||
        cand.index >= lengths[cand.row])
        throw std::out_of_range("is_descendant: coefficient index outside its row");
    if (cand.row <= parent.row) return false;
    const int lp = lengths[parent.row], lc = lengths[cand.row];
    if (lc <= lp) return false;
    return span_contains(lp, parent.index, lc, cand.index);
}

Ordering order_by_avg_magnitude(const IntMap& map) {
    const auto& leaves = layout().leaves;
    const auto flat = map.flat();
    std::array<long, kLeafCount> sums{};
    std::array<long, kLeafCount> counts{};
    for (int id = 0; id < kLeafCount; ++id) {
        counts[id] = leaves[id].count;
        for (int j = 0; j < leaves[id].count; ++j) sums[id] += std::labs(flat[leaves[id].offset + j]);
    }

    std::vector<int> nonzero;
    for (int id = 0; id < kLeafCount; ++id)
        if (sums[id] != 0) nonzero.push_back(id);
    // Compare sum_a / L_a against sum_b / L_b exactly.
    std::stable_sort(nonzero.begin(), nonzero.end(), [&](int a, int b) {
        return sums[a] * counts[b] > sums[b] * counts[a];
    });

    Ordering out;
    out.transmitted = nonzero;
    out.rows = full_order(nonzero);
    return out;
}

RowOrder full_order(std::span<const int> transmitted) {
    RowOrder rows(transmitted.begin(), transmitted.end());
    std::array<bool, kLeafCount> seen{};
    for (int id : transmitted) seen.at(id) = true;
    for (int id = 0; id < kLeafCount; ++id)
        if (!seen[id]) rows.push_back(id);
    return rows;
}

void encode_ordering(std::span<const int> transmitted, BitWriter& out) {
    for (int id : transmitted) out.put_bits(static_cast<std::uint32_t>(id + 1), 5);
    out.put_bits(0, 5);
}

std::vector<int> decode_ordering(BitReader& in) {
    std::vector<int> ids;
    std::array<bool, kLeafCount> seen{};
    for (;;) {
        if (in.remaining() < 5) throw FramingError("ordering side information truncated");
        const int code = static_cast<int>(in.get_bits(5));
        if (code == 0) break;
        if (code > kLeafCount || seen[code - 1])
            throw FramingError("invalid sub-band number in ordering side information");
        seen[code - 1] = true;
        ids.push_back(code - 1);
    }
    return ids;
}

RowOrder relocate_by_length(std::span<const int> rows) {
    RowOrder out(rows.begin(), rows.end());
    std::stable_sort(out.begin(), out.end(), [](int a, int b) {
        return layout().leaves[a].count < layout().leaves[b].count;
    });
    return out;
}

RowOrder avdz_relocate(std::span<const int> rows) {
    RowOrder out(rows.begin(), rows.end());
    if (out.empty()) return out;
    const auto lengths = row_lengths(out);
    const auto first_min = std::min_element(lengths.begin(), lengths.end()) - lengths.begin();
    std::rotate(out.begin(), out.begin() + first_min, out.begin() + first_min + 1);
    return out;
}

void dump_rows_csv(std::ostream& os, std::span<const int> rows, const IntMap& map) {
    os << "row,leaf_index,length,avg_magnitude\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Leaf& l = layout().leaves[rows[r]];
        long sum = 0;
        for (int v : map.leaf(rows[r])) sum += std::labs(v);
        os << r + 1 << ',' << l.number << ',' << l.count << ','
           << static_cast<double>(sum) / l.count << '\n';
    }
}

} // namespace avdz
