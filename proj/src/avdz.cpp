#include "avdz/avdz.hpp"

#include "avdz/errors.hpp"

#include <algorithm>
#include <cstdlib>

namespace avdz {

void encode_depth(int depth, BitWriter& out) {
    if (depth < 1 || depth > kLeafCount - 1) throw ConfigError("depth out of range");
    if (depth <= 3) {
        out.put_bits(static_cast<std::uint32_t>(depth), 2);
    } else if (depth <= 10) {
        out.put_bits(0u, 2);
        out.put_bits(static_cast<std::uint32_t>(depth - 3), 3);
    } else {
        out.put_bits(0u, 5);
        out.put_bits(static_cast<std::uint32_t>(depth - 10), 4);
    }
}

int decode_depth(BitReader& in) {
    if (const auto v = in.get_bits(2)) return static_cast<int>(v);
    if (const auto v = in.get_bits(3)) return static_cast<int>(v) + 3;
    const auto v = in.get_bits(4);
    if (v == 0) throw FormatError("invalid depth code");
    return static_cast<int>(v) + 10;
}

int depth_code_length(int depth) { return depth <= 3 ? 2 : depth <= 10 ? 5 : 9; }

RowOrder avdz_rows(std::span<const int> transmitted) { return avdz_relocate(transmitted); }

namespace {

struct Trees {
    RowGeometry geo;
    int roots;

    explicit Trees(std::span<const int> rows) : geo(rows), roots(geo.size() ? geo.lengths[0] : 0) {}

    int first(int j, int r) const { return j * (geo.lengths[r] / roots); }
    int count(int r) const { return geo.lengths[r] / roots; }
};

// Encoder and decoder share the list discipline; Io decides where bits come from.
template <typename Io>
class AvdzMachine {
public:
    AvdzMachine(const Trees& t, Io& io, CoderStats* stats)
        : t_(t), io_(io), stats_(stats), rec_(Io::kDecoding ? t.geo.total : 0), found_(t.geo.total, -1), degree_(t.roots, 0) {
        for (int j = 0; j < t.roots; ++j) lic_.push_back(t.geo.flat(0, j));
        count_ops(lic_.size());
    }

    void run(int last_step_level, std::vector<std::size_t>* pass_ends) {
        const int last_row = t_.geo.size() - 1;
        for (int n = last_step_level - 1; n >= 0; --n) {
            std::vector<int> keep;
            keep.reserve(lic_.size());
            for (int idx : lic_) {
                if (io_.sig(idx, n)) {
                    significant(idx, n);
                    count_ops(1);
                } else {
                    keep.push_back(idx);
                }
            }
            lic_ = std::move(keep);

            for (int j = 0; j < t_.roots; ++j) {
                const int k_old = degree_[j];
                if (k_old == last_row || !io_.tree_sig(j, k_old + 1, n)) continue;
                const int k_new = io_.depth(j, k_old, n) + k_old;
                if (k_new > last_row) throw FormatError("depth beyond last row");
                for (int r = k_old + 1; r <= k_new; ++r) {
                    const int base = t_.geo.flat(r, t_.first(j, r));
                    for (int b = 0; b < t_.count(r); ++b) {
                        if (io_.sig(base + b, n)) {
                            significant(base + b, n);
                        } else {
                            lic_.push_back(base + b);
                        }
                        count_ops(1);
                    }
                }
                degree_[j] = k_new;
                count_ops(1);
            }
            if (pass_ends) pass_ends->push_back(io_.position());

            for (int idx : lsc_)
                if (found_[idx] > n) {
                    const bool bit = io_.refine(idx, n);
                    if constexpr (Io::kDecoding) rec_.refine(idx, bit);
                }
            if (pass_ends) pass_ends->push_back(io_.position());
        }
    }

    const Reconstruction& reconstruction() const { return rec_; }

private:
    void significant(int idx, int n) {
        const bool negative = io_.sign(idx);
        if constexpr (Io::kDecoding) rec_.discover(idx, n, negative);
        found_[idx] = n;
        lsc_.push_back(idx);
    }
    void count_ops(std::size_t k) {
        if (stats_) stats_->list_ops += k;
    }

    const Trees& t_;
    Io& io_;
    CoderStats* stats_;
    Reconstruction rec_;
    std::vector<int> found_;
    std::vector<int> degree_;
    std::vector<int> lic_;
    std::vector<int> lsc_;
};

class EncoderIo {
public:
    static constexpr bool kDecoding = false;

    EncoderIo(const Trees& t, std::vector<int> vals) : rows_(t.geo.size()), vals_(std::move(vals)) {
        w_.reserve(8 * kFrameSize);
        // row_max_[j][r]: max magnitude of root j's members in row r;
        // suffix_[j][r]: the same over rows r and below.
        row_max_.assign(static_cast<std::size_t>(t.roots) * (rows_ + 1), 0);
        suffix_ = row_max_;
        for (int r = 0; r < rows_; ++r) {
            const int per_root = t.count(r);
            const int* row = vals_.data() + t.geo.offsets[r];
            for (int b = 0; b < t.geo.lengths[r]; ++b) {
                int& m = row_max_[static_cast<std::size_t>(b / per_root) * (rows_ + 1) + r];
                m = std::max(m, std::abs(row[b]));
            }
        }
        for (int j = 0; j < t.roots; ++j) {
            const std::size_t base = static_cast<std::size_t>(j) * (rows_ + 1);
            for (int r = rows_ - 1; r >= 0; --r) suffix_[base + r] = std::max(suffix_[base + r + 1], row_max_[base + r]);
        }
    }

    bool sig(int idx, int n) { return emit(std::abs(vals_[idx]) >= (1 << n)); }
    bool sign(int idx) { return emit(vals_[idx] < 0); }
    bool refine(int idx, int n) { return emit((std::abs(vals_[idx]) >> n) & 1); }
    bool tree_sig(int j, int from_row, int n) { return emit(suffix_[at(j, from_row)] >= (1 << n)); }
    int depth(int j, int k_old, int n) {
        int k_new = rows_ - 1;
        while (row_max_[at(j, k_new)] < (1 << n)) --k_new;
        encode_depth(k_new - k_old, w_);
        return k_new - k_old;
    }
    std::size_t position() const { return w_.size(); }
    BitBuffer take() { return w_.take(); }

private:
    bool emit(bool b) {
        w_.put_bit(b);
        return b;
    }

    std::size_t at(int j, int r) const { return static_cast<std::size_t>(j) * (rows_ + 1) + r; }

    int rows_;
    std::vector<int> vals_;
    std::vector<int> row_max_;
    std::vector<int> suffix_;
    BitWriter w_;
};

class DecoderIo {
public:
    static constexpr bool kDecoding = true;

    explicit DecoderIo(const BitBuffer& payload) : in_(payload) {}

    bool sig(int, int) { return in_.get_bit(); }
    bool sign(int) { return in_.get_bit(); }
    bool refine(int, int) { return in_.get_bit(); }
    bool tree_sig(int, int, int) { return in_.get_bit(); }
    int depth(int, int, int) { return decode_depth(in_); }
    std::size_t position() const { return in_.position(); }

private:
    BitReader in_;
};

} // namespace

Payload avdz_encode_rows(const IntMap& map, std::span<const int> rows, CoderStats* stats) {
    const Trees t(rows);
    std::vector<int> vals = gather(map, t.geo);
    Payload out;
    out.last_step_level = last_step_level_for(vals);
    if (out.last_step_level == 0) return out;
    EncoderIo io(t, std::move(vals));
    AvdzMachine<EncoderIo> m(t, io, stats);
    m.run(out.last_step_level, &out.pass_ends);
    out.bits = io.take();
    if (stats) stats->bits += out.bits.bit_count;
    return out;
}

RealMap avdz_decode_rows(const BitBuffer& payload, int last_step_level, std::span<const int> rows,
                         CoderStats* stats) {
    if (last_step_level < 0 || last_step_level > kMaxLastStepLevel)
        throw FormatError("last step level out of range");
    const Trees t(rows);
    if (last_step_level == 0) return scatter(t.geo, std::vector<double>(t.geo.total, 0.0));
    DecoderIo io(payload);
    AvdzMachine<DecoderIo> m(t, io, stats);
    try {
        m.run(last_step_level, nullptr);
    } catch (const EndOfStream&) {
    }
    if (stats) stats->bits += io.position();
    return scatter(t.geo, m.reconstruction().values());
}

Payload avdz_encode(const IntMap& map) { return avdz_encode_rows(map, avdz_rows(ordered_rows(map))); }

RealMap avdz_decode(const BitBuffer& payload, const SideInfo& side) {
    return avdz_decode_rows(payload, side.last_step_level, avdz_rows(side.ordering));
}

} // namespace avdz
