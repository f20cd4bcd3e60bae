#include "avdz/spiht.hpp"

#include "avdz/errors.hpp"

#include <algorithm>
#include <cstdlib>

namespace avdz {

bool significance(std::span<const int> magnitudes, int n) {
    const long t = 1L << n;
    return std::any_of(magnitudes.begin(), magnitudes.end(), [t](int m) { return std::abs(m) >= t; });
}

namespace {

int window_depth(int row) { return row == 0 ? 3 : 2; }

} // namespace

SpihtForest::SpihtForest(std::span<const int> rows, bool widened)
    : geo(rows), parent_row(geo.size(), -1), children(geo.total) {
    const auto& len = geo.lengths;
    std::vector<std::uint8_t> reachable(geo.size(), 0);
    if (!reachable.empty()) reachable[0] = 1;
    for (int p = 0; p < geo.size(); ++p) {
        if (!reachable[p]) continue;
        const int depth = widened ? window_depth(p) : 1;
        int seen = 0;
        for (int a = p + 1; a < geo.size() && seen < depth; ++a) {
            if (len[a] <= len[p]) continue;
            ++seen;
            if (reachable[a]) continue;
            parent_row[a] = p;
            reachable[a] = 1;
        }
    }
    for (int a = 0; a < geo.size(); ++a) {
        const int p = parent_row[a];
        if (p < 0) continue;
        const int k = len[a] / len[p];
        for (int j = 0; j < len[p]; ++j)
            for (int i = j * k; i < (j + 1) * k; ++i) children[geo.flat(p, j)].push_back(geo.flat(a, i));
    }
}

namespace {

enum class SetType : std::uint8_t { A, B };

struct LisEntry {
    int idx;
    SetType type;
};

// Shared list machinery. The encoder answers significance queries from
// magnitudes; the decoder reads the same answers from the stream.
class SpihtMachine {
public:
    explicit SpihtMachine(const SpihtForest& f) : f_(f), rec_(f.geo.total), found_level_(f.geo.total, -1) {
        has_desc_.resize(f.geo.total);
        has_grand_.resize(f.geo.total);
        for (int i = 0; i < f.geo.total; ++i) has_desc_[i] = !f.children[i].empty();
        for (int i = 0; i < f.geo.total; ++i)
            has_grand_[i] = std::any_of(f.children[i].begin(), f.children[i].end(),
                                        [&](int k) { return has_desc_[k]; });
        for (int r = 0; r < f.geo.size(); ++r) {
            if (f.parent_row[r] >= 0) continue;
            for (int j = 0; j < f.geo.lengths[r]; ++j) {
                const int idx = f.geo.flat(r, j);
                lip_.push_back(idx);
                if (has_desc_[idx]) lis_.push_back({idx, SetType::A});
            }
        }
    }

    // Io supplies: bool sig(int idx, n), bool sig_d(idx, n), bool sig_l(idx, n),
    // bool sign(idx), bool msb(idx), bool refine(idx, bit).
    template <typename Io>
    void sorting_pass(Io& io, int n, bool merged_top) {
        std::vector<int> keep;
        keep.reserve(lip_.size());
        for (int idx : lip_) {
            if (io.sig(idx, n)) {
                newly_significant(io, idx, n, merged_top);
            } else {
                keep.push_back(idx);
            }
        }
        lip_ = std::move(keep);

        // New LIS entries are appended and visited in this same pass.
        for (std::size_t e = 0; e < lis_.size(); ++e) {
            LisEntry entry = lis_[e];
            if (entry.idx < 0) continue;
            if (entry.type == SetType::A) {
                if (!io.sig_d(entry.idx, n)) continue;
                for (int k : f_.children[entry.idx]) {
                    if (io.sig(k, n)) {
                        newly_significant(io, k, n, merged_top);
                    } else {
                        lip_.push_back(k);
                    }
                }
                lis_[e].idx = -1;
                if (has_grand_[entry.idx]) lis_.push_back({entry.idx, SetType::B});
            } else {
                if (!io.sig_l(entry.idx, n)) continue;
                lis_[e].idx = -1;
                for (int k : f_.children[entry.idx])
                    if (has_desc_[k]) lis_.push_back({k, SetType::A});
            }
        }
        compact();
    }

    template <typename Io>
    void refinement_pass(Io& io, int n) {
        for (int idx : lsp_)
            if (found_level_[idx] > n) rec_.refine(idx, io.refine(idx, n));
    }

    // After a merged first pass at n, entries found one level up still need their bit n.
    template <typename Io>
    void merged_refinement(Io& io, int n) {
        for (int idx : lsp_)
            if (found_level_[idx] == n + 1) rec_.refine(idx, io.refine(idx, n));
    }

    void compact() {
        std::erase_if(lis_, [](const LisEntry& e) { return e.idx < 0; });
    }

    const Reconstruction& reconstruction() const { return rec_; }

private:
    template <typename Io>
    void newly_significant(Io& io, int idx, int n, bool merged_top) {
        const bool negative = io.sign(idx);
        const int level = merged_top && io.msb(idx, n + 1) ? n + 1 : n;
        rec_.discover(idx, level, negative);
        found_level_[idx] = level;
        lsp_.push_back(idx);
    }

    const SpihtForest& f_;
    Reconstruction rec_;
    std::vector<int> found_level_;
    std::vector<std::uint8_t> has_desc_;
    std::vector<std::uint8_t> has_grand_;
    std::vector<int> lip_;
    std::vector<int> lsp_;
    std::vector<LisEntry> lis_;
};

struct EncoderIo {
    const std::vector<int>& vals;
    const std::vector<int>& max_d;
    const std::vector<int>& max_l;
    BitWriter& w;

    bool emit(bool b) {
        w.put_bit(b);
        return b;
    }
    bool sig(int idx, int n) { return emit(std::abs(vals[idx]) >= (1 << n)); }
    bool sig_d(int idx, int n) { return emit(max_d[idx] >= (1 << n)); }
    bool sig_l(int idx, int n) { return emit(max_l[idx] >= (1 << n)); }
    bool sign(int idx) { return emit(vals[idx] < 0); }
    bool msb(int idx, int n) { return emit(std::abs(vals[idx]) >= (1 << n)); }
    bool refine(int idx, int n) { return emit((std::abs(vals[idx]) >> n) & 1); }
};

struct DecoderIo {
    BitReader& in;

    bool sig(int, int) { return in.get_bit(); }
    bool sig_d(int, int) { return in.get_bit(); }
    bool sig_l(int, int) { return in.get_bit(); }
    bool sign(int) { return in.get_bit(); }
    bool msb(int, int) { return in.get_bit(); }
    bool refine(int, int) { return in.get_bit(); }
};

bool widened(SpihtVariant v) { return v == SpihtVariant::ModifiedO || v == SpihtVariant::Merged; }

// Drives the level loop shared by encoder and decoder.
template <typename Io>
void run_levels(SpihtMachine& m, Io& io, int last_step_level, SpihtVariant variant,
                std::vector<std::size_t>* pass_ends, const BitWriter* w) {
    const auto mark = [&] {
        if (pass_ends) pass_ends->push_back(w->size());
    };
    int n = last_step_level - 1;
    if (variant == SpihtVariant::Merged && n >= 1) {
        --n;
        m.sorting_pass(io, n, true);
        mark();
        m.merged_refinement(io, n);
        mark();
        --n;
    }
    for (; n >= 0; --n) {
        m.sorting_pass(io, n, false);
        mark();
        m.refinement_pass(io, n);
        mark();
    }
}

} // namespace

Payload spiht_encode_rows(const IntMap& map, std::span<const int> rows, SpihtVariant variant) {
    const SpihtForest forest(rows, widened(variant));
    const RowGeometry& geo = forest.geo;
    const std::vector<int> vals = gather(map, geo);
    Payload out;
    out.last_step_level = last_step_level_for(vals);
    if (out.last_step_level == 0) return out;

    // Children always sit in later rows, so a reverse sweep sees them first.
    std::vector<int> max_d(geo.total, 0), max_l(geo.total, 0);
    for (int idx = geo.total - 1; idx >= 0; --idx)
        for (int k : forest.children[idx]) {
            max_d[idx] = std::max({max_d[idx], std::abs(vals[k]), max_d[k]});
            max_l[idx] = std::max(max_l[idx], max_d[k]);
        }

    BitWriter w;
    EncoderIo io{vals, max_d, max_l, w};
    SpihtMachine m(forest);
    run_levels(m, io, out.last_step_level, variant, &out.pass_ends, &w);
    out.bits = w.take();
    return out;
}

RealMap spiht_decode_rows(const BitBuffer& payload, int last_step_level, std::span<const int> rows,
                          SpihtVariant variant) {
    if (last_step_level < 0 || last_step_level > kMaxLastStepLevel)
        throw FormatError("last step level out of range");
    const SpihtForest forest(rows, widened(variant));
    SpihtMachine m(forest);
    BitReader in(payload);
    DecoderIo io{in};
    try {
        run_levels(m, io, last_step_level, variant, nullptr, nullptr);
    } catch (const EndOfStream&) {
    }
    return scatter(forest.geo, m.reconstruction().values());
}

Payload spiht_encode(const IntMap& map, SpihtVariant variant) {
    const RowOrder rows = variant == SpihtVariant::Baseline ? baseline_rows() : ordered_rows(map);
    return spiht_encode_rows(map, rows, variant);
}

RealMap spiht_decode(const BitBuffer& payload, const SideInfo& side, SpihtVariant variant) {
    const RowOrder rows = variant == SpihtVariant::Baseline ? baseline_rows() : RowOrder(side.ordering);
    return spiht_decode_rows(payload, side.last_step_level, rows, variant);
}

} // namespace avdz
