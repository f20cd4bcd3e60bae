#include "avdz/ezw.hpp"

#include "avdz/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>

namespace avdz {
namespace {

struct Structure {
    RowGeometry geo;
    std::vector<std::vector<int>> desc_rows;  // strictly longer rows below each row

    explicit Structure(std::span<const int> rows) : geo(rows), desc_rows(geo.size()) {
        for (int r = 0; r < geo.size(); ++r)
            for (int d = r + 1; d < geo.size(); ++d)
                if (geo.lengths[d] > geo.lengths[r]) desc_rows[r].push_back(d);
    }

    int ratio(int r, int d) const { return geo.lengths[d] / geo.lengths[r]; }

    template <typename F>
    void for_each_descendant(int r, int j, F&& f) const {
        for (int d : desc_rows[r]) {
            const int k = ratio(r, d);
            for (int i = j * k; i < (j + 1) * k; ++i) f(geo.flat(d, i));
        }
    }
};

// Per-row dyadic max pyramids over the working magnitudes.
class MaxPyramid {
public:
    explicit MaxPyramid(const RowGeometry& geo) : geo_(geo), levels_(geo.size()) {}

    void rebuild(std::span<const int> working) {
        for (int r = 0; r < geo_.size(); ++r) {
            auto& lv = levels_[r];
            lv.clear();
            lv.emplace_back(working.begin() + geo_.offsets[r],
                            working.begin() + geo_.offsets[r] + geo_.lengths[r]);
            while (lv.back().size() > 1) {
                const auto& prev = lv.back();
                std::vector<int> next(prev.size() / 2);
                for (std::size_t i = 0; i < next.size(); ++i) next[i] = std::max(prev[2 * i], prev[2 * i + 1]);
                lv.push_back(std::move(next));
            }
        }
    }

    // Max over the aligned block of `size` (a power of two) starting at block index `block`.
    int block_max(int row, int size, int block) const {
        return levels_[row][std::countr_zero(static_cast<unsigned>(size))][block];
    }

private:
    const RowGeometry& geo_;
    std::vector<std::vector<std::vector<int>>> levels_;
};

} // namespace

Payload ezw_encode_rows(const IntMap& map, std::span<const int> rows, std::vector<EzwTraceEntry>* trace) {
    const Structure st(rows);
    const RowGeometry& geo = st.geo;
    const std::vector<int> vals = gather(map, geo);

    Payload out;
    out.last_step_level = last_step_level_for(vals);
    if (out.last_step_level == 0) return out;

    std::vector<int> mag(vals.size());
    std::transform(vals.begin(), vals.end(), mag.begin(), [](int v) { return std::abs(v); });
    std::vector<int> working = mag;
    std::vector<std::uint8_t> significant(vals.size(), 0);
    std::vector<int> skip_level(vals.size(), -1);
    std::vector<int> sublist;
    MaxPyramid pyramid(geo);
    BitWriter w;

    for (int n = out.last_step_level - 1; n >= 0; --n) {
        const int t = 1 << n;
        pyramid.rebuild(working);
        for (int r = 0; r < geo.size(); ++r) {
            const bool tree_node = !st.desc_rows[r].empty();
            for (int j = 0; j < geo.lengths[r]; ++j) {
                const int idx = geo.flat(r, j);
                if (significant[idx] || skip_level[idx] == n) continue;
                EzwSymbol sym;
                if (mag[idx] >= t) {
                    sym = vals[idx] < 0 ? EzwSymbol::Neg : EzwSymbol::Pos;
                    w.put_bits(sym == EzwSymbol::Neg ? 3u : 2u, 2);
                    significant[idx] = 1;
                    sublist.push_back(idx);
                } else if (tree_node) {
                    int dmax = 0;
                    for (int d : st.desc_rows[r]) dmax = std::max(dmax, pyramid.block_max(d, st.ratio(r, d), j));
                    if (dmax < t) {
                        sym = EzwSymbol::Ztr;
                        w.put_bits(0u, 2);
                        st.for_each_descendant(r, j, [&](int k) { skip_level[k] = n; });
                    } else {
                        sym = EzwSymbol::Iz;
                        w.put_bits(1u, 2);
                    }
                } else {
                    sym = EzwSymbol::Z;
                    w.put_bit(false);
                }
                if (trace) trace->push_back({n, {r, j}, sym});
            }
        }
        out.pass_ends.push_back(w.size());
        if (n > 0) {
            for (int idx : sublist) w.put_bit((mag[idx] >> (n - 1)) & 1);
            out.pass_ends.push_back(w.size());
        }
        for (int idx : sublist) working[idx] = 0;
    }
    out.bits = w.take();
    return out;
}

RealMap ezw_decode_rows(const BitBuffer& payload, int last_step_level, std::span<const int> rows) {
    if (last_step_level < 0 || last_step_level > kMaxLastStepLevel)
        throw FormatError("last step level out of range");
    const Structure st(rows);
    const RowGeometry& geo = st.geo;
    Reconstruction rec(geo.total);
    std::vector<std::uint8_t> significant(geo.total, 0);
    std::vector<int> skip_level(geo.total, -1);
    std::vector<int> sublist;
    BitReader in(payload);

    try {
        for (int n = last_step_level - 1; n >= 0; --n) {
            for (int r = 0; r < geo.size(); ++r) {
                const bool tree_node = !st.desc_rows[r].empty();
                for (int j = 0; j < geo.lengths[r]; ++j) {
                    const int idx = geo.flat(r, j);
                    if (significant[idx] || skip_level[idx] == n) continue;
                    const bool first = in.get_bit();
                    if (!tree_node && !first) continue;
                    const bool second = in.get_bit();
                    if (first) {
                        rec.discover(idx, n, second);
                        significant[idx] = 1;
                        sublist.push_back(idx);
                    } else if (!second) {
                        st.for_each_descendant(r, j, [&](int k) { skip_level[k] = n; });
                    }
                }
            }
            if (n > 0)
                for (int idx : sublist) rec.refine(idx, in.get_bit());
        }
    } catch (const EndOfStream&) {
    }
    return scatter(geo, rec.values());
}

Payload ezw_encode(const IntMap& map, EzwVariant variant) {
    const RowOrder rows = variant == EzwVariant::Baseline ? baseline_rows() : ordered_rows(map);
    return ezw_encode_rows(map, rows);
}

RealMap ezw_decode(const BitBuffer& payload, const SideInfo& side, EzwVariant variant) {
    const RowOrder rows = variant == EzwVariant::Baseline ? baseline_rows() : RowOrder(side.ordering);
    return ezw_decode_rows(payload, side.last_step_level, rows);
}

} // namespace avdz
