#include "avdz/stream.hpp"

#include "avdz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace avdz {
namespace {

constexpr char kMagic[4] = {'A', 'V', 'D', 'Z'};
constexpr std::size_t kLengthPrefixBits = 16;
constexpr std::size_t kMaxPayloadBits = 0xFFFF;

std::size_t round_up8(std::size_t bits) { return (bits + 7) / 8 * 8; }

bool sends_alloc(const FrameHeader& h, QuantizerMode mode) {
    return h.last_step_level > 0 && mode == QuantizerMode::Perceptual;
}
bool sends_ordering(const FrameHeader& h) { return h.last_step_level > 0 && uses_ordering(h.coder); }

} // namespace

std::size_t header_bits(const FrameHeader& h, QuantizerMode mode) {
    std::size_t bits = 3 + 4;
    if (sends_alloc(h, mode)) bits += kAllocSideInfoBits;
    if (sends_ordering(h)) bits += ordering_bits(h.ordering.size());
    return bits;
}

std::size_t frame_bytes(std::size_t header_bits, std::size_t payload_bits) {
    return kLengthPrefixBits / 8 + round_up8(header_bits + payload_bits) / 8;
}

std::vector<std::uint8_t> pack_frame(const FrameStream& frame, QuantizerMode mode) {
    const FrameHeader& h = frame.header;
    if (frame.payload.bit_count > kMaxPayloadBits) throw ConfigError("frame payload exceeds 65535 bits");
    if (h.last_step_level < 0 || h.last_step_level > kMaxLastStepLevel)
        throw ConfigError("last step level out of range");
    BitWriter w;
    w.put_bits(static_cast<std::uint32_t>(frame.payload.bit_count), 16);
    w.put_bits(static_cast<std::uint32_t>(h.coder), 3);
    w.put_bits(static_cast<std::uint32_t>(h.last_step_level), 4);
    if (sends_alloc(h, mode)) encode_alloc_side_info(h.alloc, w);
    if (sends_ordering(h)) encode_ordering(h.ordering, w);
    w.append(frame.payload);
    return w.take().bytes;
}

FrameStream unpack_frame(std::span<const std::uint8_t> bytes, std::size_t& offset, QuantizerMode mode,
                         std::size_t frame_index) {
    if (offset > bytes.size()) throw FramingError("frame offset past end", frame_index);
    const auto rest = bytes.subspan(offset);
    BitReader in(rest, rest.size() * 8);
    FrameStream f;
    try {
        const std::size_t payload_bits = in.get_bits(16);
        const auto coder = coder_from_id(in.get_bits(3));
        if (!coder) throw FramingError("unknown coder id", frame_index);
        f.header.coder = *coder;
        f.header.last_step_level = static_cast<int>(in.get_bits(4));
        if (sends_alloc(f.header, mode)) {
            f.header.alloc = decode_alloc_side_info(in);
        } else if (mode == QuantizerMode::Uniform7) {
            f.header.alloc = uniform_allocation(kUniformBits);
        }
        if (sends_ordering(f.header)) f.header.ordering = decode_ordering(in);
        if (in.remaining() < payload_bits) throw FramingError("payload underrun", frame_index);
        BitWriter pw;
        for (std::size_t i = 0; i < payload_bits; ++i) pw.put_bit(in.get_bit());
        f.payload = pw.take();
    } catch (const EndOfStream&) {
        throw FramingError("truncated frame header", frame_index);
    } catch (const FramingError& e) {
        if (e.frame_index() == frame_index) throw;
        throw FramingError(e.what(), frame_index);
    }
    offset += round_up8(in.position()) / 8;
    return f;
}

std::vector<std::uint8_t> pack_file_header(const FileHeader& h) {
    h.kernel.validate();
    const long beta = std::lround(h.kernel.beta * 10000.0);
    if (h.kernel.order > 255) throw ConfigError("kernel order does not fit the header");
    BitWriter w;
    for (char c : kMagic) w.put_bits(static_cast<std::uint8_t>(c), 8);
    w.put_bits(kFormatVersion, 8);
    w.put_bits(h.sample_rate, 16);
    w.put_bits(h.frame_size, 16);
    w.put_bits(h.sample_count, 32);
    w.put_bits(static_cast<std::uint32_t>(h.kernel.order), 8);
    w.put_bits(static_cast<std::uint32_t>(beta), 16);
    w.put_bits(static_cast<std::uint32_t>(h.quantizer), 8);
    return w.take().bytes;
}

FileHeader unpack_file_header(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kFileHeaderBytes) throw FramingError("file header truncated");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FramingError("bad magic");
    BitReader in(bytes.subspan(4), (kFileHeaderBytes - 4) * 8);
    if (in.get_bits(8) != kFormatVersion) throw FramingError("unsupported format version");
    FileHeader h;
    h.sample_rate = static_cast<std::uint16_t>(in.get_bits(16));
    h.frame_size = static_cast<std::uint16_t>(in.get_bits(16));
    h.sample_count = in.get_bits(32);
    h.kernel.order = static_cast<int>(in.get_bits(8));
    h.kernel.beta = in.get_bits(16) / 10000.0;
    const auto q = in.get_bits(8);
    if (q > 1) throw FramingError("unknown quantizer mode");
    h.quantizer = static_cast<QuantizerMode>(q);
    if (h.sample_rate != kSampleRate || h.frame_size != kFrameSize)
        throw FramingError("unsupported sample rate or frame size");
    try {
        h.kernel.validate();
    } catch (const ConfigError& e) {
        throw FramingError(std::string("bad kernel in header: ") + e.what());
    }
    return h;
}

std::vector<std::uint8_t> serialize(const StreamFile& file) {
    std::vector<std::uint8_t> out = pack_file_header(file.header);
    for (const auto& f : file.frames) {
        const auto bytes = pack_frame(f, file.header.quantizer);
        out.insert(out.end(), bytes.begin(), bytes.end());
    }
    return out;
}

StreamFile deserialize(std::span<const std::uint8_t> bytes) {
    StreamFile file;
    file.header = unpack_file_header(bytes);
    const std::size_t frames = (file.header.sample_count + kFrameSize - 1) / kFrameSize;
    std::size_t offset = kFileHeaderBytes;
    for (std::size_t i = 0; i < frames; ++i)
        file.frames.push_back(unpack_frame(bytes, offset, file.header.quantizer, i));
    if (offset != bytes.size()) throw FramingError("trailing bytes after last frame", frames);
    return file;
}

long RateController::minimum_budget(QuantizerMode mode) {
    FrameHeader worst;
    worst.last_step_level = 1;
    worst.ordering.resize(kLeafCount);
    return static_cast<long>(kLengthPrefixBits + round_up8(header_bits(worst, mode)));
}

RateController::RateController(double target_bps, QuantizerMode mode) : mode_(mode) {
    if (!(target_bps > 0) || !std::isfinite(target_bps)) throw ConfigError("target rate must be positive");
    budget_ = std::lround(target_bps * kFrameSeconds);
    if (budget_ < minimum_budget(mode))
        throw ConfigError("target rate below the minimum of " +
                          std::to_string(minimum_budget(mode) / kFrameSeconds) + " bit/s");
}

void RateController::apply(FrameStream& frame, bool last, std::size_t samples) {
    const std::size_t h = header_bits(frame.header, mode_);
    const long share = samples >= static_cast<std::size_t>(kFrameSize) ? budget_ : std::lround(static_cast<double>(budget_) * samples / kFrameSize);
    const long available = share + carry_;
    const std::size_t full = frame.payload.bit_count;
    std::size_t keep = full;

    const long room = available - static_cast<long>(kLengthPrefixBits);
    const long fit = room > 0 ? room / 8 * 8 - static_cast<long>(h) : 0;
    if (fit < static_cast<long>(full)) {
        keep = fit > 0 ? static_cast<std::size_t>(fit) : 0;
        frame.payload = frame.payload.prefix(keep);
    } else {
        // Stuff enough that the carry stays within one budget (or empties on the last frame).
        const long floor_used = last ? room / 8 * 8 + static_cast<long>(kLengthPrefixBits) : carry_;
        const long need = floor_used - static_cast<long>(kLengthPrefixBits);
        const long target_payload = static_cast<long>(round_up8(static_cast<std::size_t>(std::max(0L, need)))) -
                                    static_cast<long>(h);
        const std::size_t padded =
            std::min<std::size_t>(kMaxPayloadBits, static_cast<std::size_t>(std::max<long>(target_payload, full)));
        if (padded > full) {
            BitWriter w;
            w.append(frame.payload);
            for (std::size_t i = full; i < padded; ++i) w.put_bit(false);
            frame.payload = w.take();
        }
    }
    const long used = static_cast<long>(frame_bytes(h, frame.payload.bit_count) * 8);
    carry_ = std::min(available - used, budget_);
}

} // namespace avdz
