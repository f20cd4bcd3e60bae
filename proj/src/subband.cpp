#include "avdz/subband.hpp"

#include "avdz/errors.hpp"

#include <algorithm>
#include <utility>

namespace avdz {

namespace {

// Leaf edges in Hz with their critical band. Bands 14-19 combine leaves of
// different widths; every edge is admissible for a dyadic split of 0-8 kHz.
struct LeafSpec {
    int low_hz;
    int high_hz;
    int band;
};

constexpr std::array<LeafSpec, kLeafCount> kLeafSpecs{{
    {0, 125, 1},       {125, 250, 2},     {250, 375, 3},     {375, 500, 4},
    {500, 625, 5},     {625, 750, 6},     {750, 875, 7},     {875, 1000, 8},
    {1000, 1250, 9},   {1250, 1500, 10},  {1500, 1750, 11},  {1750, 2000, 12},
    {2000, 2250, 13},  {2250, 2500, 14},  {2500, 2750, 14},  {2750, 3000, 15},
    {3000, 3125, 15},  {3125, 3250, 16},  {3250, 3500, 16},  {3500, 3750, 16},
    {3750, 4000, 17},  {4000, 5000, 17},  {5000, 6000, 18},  {6000, 6500, 18},
    {6500, 7000, 19},  {7000, 8000, 19},
}};

int depth_for_width(int width_hz) {
    int depth = 0;
    for (int w = kSampleRate / 2; w > width_hz; w /= 2) ++depth;
    return depth;
}

int find_leaf(int low_hz, int high_hz) {
    const auto& leaves = layout().leaves;
    for (int i = 0; i < kLeafCount; ++i)
        if (leaves[i].low_hz == low_hz && leaves[i].high_hz == high_hz) return i;
    return -1;
}

// A node's signal is spectrally inverted after an odd number of high-pass
// decimations along its path; that swaps which child holds the lower half.
void analyze_node(std::vector<double> signal, int low_hz, int high_hz, bool inverted,
                  const FilterQuadruple& q, RealMap& out) {
    if (const int id = find_leaf(low_hz, high_hz); id >= 0) {
        auto dst = out.leaf(id);
        std::copy(signal.begin(), signal.end(), dst.begin());
        return;
    }
    if (signal.size() < 2) throw ConfigError("analyze: layout is not reachable by dyadic splits");
    const int mid = (low_hz + high_hz) / 2;
    Halves h = split(signal, q);
    if (!inverted) {
        analyze_node(std::move(h.low), low_hz, mid, false, q, out);
        analyze_node(std::move(h.high), mid, high_hz, true, q, out);
    } else {
        analyze_node(std::move(h.low), mid, high_hz, true, q, out);
        analyze_node(std::move(h.high), low_hz, mid, false, q, out);
    }
}

std::vector<double> synthesize_node(int low_hz, int high_hz, bool inverted, const FilterQuadruple& q,
                                    const RealMap& map) {
    if (const int id = find_leaf(low_hz, high_hz); id >= 0) {
        auto src = map.leaf(id);
        return {src.begin(), src.end()};
    }
    const int mid = (low_hz + high_hz) / 2;
    std::vector<double> lo, hi;
    if (!inverted) {
        lo = synthesize_node(low_hz, mid, false, q, map);
        hi = synthesize_node(mid, high_hz, true, q, map);
    } else {
        lo = synthesize_node(mid, high_hz, true, q, map);
        hi = synthesize_node(low_hz, mid, false, q, map);
    }
    return merge(lo, hi, q);
}

} // namespace

SubbandLayout make_layout() {
    SubbandLayout lay{};
    int offset = 0;
    for (int i = 0; i < kLeafCount; ++i) {
        const LeafSpec& s = kLeafSpecs[i];
        const int depth = depth_for_width(s.high_hz - s.low_hz);
        const int count = kFrameSize >> depth;
        lay.leaves[i] = Leaf{i + 1, s.low_hz, s.high_hz, depth, count, s.band, offset};
        offset += count;
    }
    for (int b = 0; b < kBandCount; ++b) {
        Band band{b + 1, 0, 0, {}, 0};
        for (int i = 0; i < kLeafCount; ++i) {
            if (lay.leaves[i].band != b + 1) continue;
            if (band.leaves.empty()) band.low_hz = lay.leaves[i].low_hz;
            band.high_hz = lay.leaves[i].high_hz;
            band.leaves.push_back(i);
            band.count += lay.leaves[i].count;
        }
        lay.bands[b] = std::move(band);
    }
    return lay;
}

const SubbandLayout& layout() {
    static const SubbandLayout instance = make_layout();
    return instance;
}

void dump_layout_csv(std::ostream& os, const SubbandLayout& lay) {
    os << "leaf_index,low_Hz,high_Hz,depth,count\n";
    for (const Leaf& l : lay.leaves)
        os << l.number << ',' << l.low_hz << ',' << l.high_hz << ',' << l.depth << ',' << l.count << '\n';
}

RealMap analyze(std::span<const double> frame, const FilterQuadruple& q) {
    if (frame.size() != static_cast<std::size_t>(kFrameSize))
        throw ConfigError("analyze: frame must hold 512 samples");
    RealMap out;
    analyze_node({frame.begin(), frame.end()}, 0, kSampleRate / 2, false, q, out);
    return out;
}

std::vector<double> synthesize(const RealMap& map, const FilterQuadruple& q) {
    if (map.flat().size() != static_cast<std::size_t>(kFrameSize))
        throw ConfigError("synthesize: map does not match the layout");
    return synthesize_node(0, kSampleRate / 2, false, q, map);
}

} // namespace avdz
