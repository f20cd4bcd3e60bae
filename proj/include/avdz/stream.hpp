#pragma once

#include "avdz/coder.hpp"
#include "avdz/filterbank.hpp"
#include "avdz/pquant.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace avdz {

enum class QuantizerMode : std::uint8_t { Perceptual = 0, Uniform7 = 1 };

inline constexpr int kUniformBits = 7;
inline constexpr double kFrameSeconds = static_cast<double>(kFrameSize) / kSampleRate;

/// Stream-level parameters. Serialized as 17 bytes:
/// "AVDZ", version u8, sample rate u16, frame size u16, sample count u32,
/// kernel order u8, beta * 10000 u16, quantizer mode u8 (big-endian).
struct FileHeader {
    std::uint16_t sample_rate = kSampleRate;
    std::uint16_t frame_size = kFrameSize;
    std::uint32_t sample_count = 0;
    KernelSpec kernel;
    QuantizerMode quantizer = QuantizerMode::Perceptual;
};

inline constexpr std::uint8_t kFormatVersion = 1;
inline constexpr std::size_t kFileHeaderBytes = 17;

struct FrameHeader {
    CoderId coder = CoderId::Avdz;
    int last_step_level = 0;
    BitAllocation alloc;        // sent only in perceptual mode with a non-zero level
    std::vector<int> ordering;  // sent only by ordered coders with a non-zero level
};

struct FrameStream {
    FrameHeader header;
    BitBuffer payload;
};

/// Header bits after the 16-bit payload length prefix.
std::size_t header_bits(const FrameHeader& h, QuantizerMode mode);

/// Total bytes a frame occupies on disk for a given payload length.
std::size_t frame_bytes(std::size_t header_bits, std::size_t payload_bits);

/// u16 payload bit count, coder id (3), last step level (4), allocation (33),
/// ordering, payload, zero padding to a byte boundary.
std::vector<std::uint8_t> pack_frame(const FrameStream& frame, QuantizerMode mode);

/// Reads one frame at `offset` and advances it. Throws FramingError on underrun or bad fields.
FrameStream unpack_frame(std::span<const std::uint8_t> bytes, std::size_t& offset, QuantizerMode mode,
                         std::size_t frame_index);

std::vector<std::uint8_t> pack_file_header(const FileHeader& h);
FileHeader unpack_file_header(std::span<const std::uint8_t> bytes);

struct StreamFile {
    FileHeader header;
    std::vector<FrameStream> frames;
};

std::vector<std::uint8_t> serialize(const StreamFile& file);
StreamFile deserialize(std::span<const std::uint8_t> bytes);

/// Fixed-rate control by payload truncation with a one-frame carry buffer.
/// All on-disk frame bits count against the budget. Unused bits carry over
/// up to one frame budget; beyond that the payload is padded with zero
/// stuffing bits, which decoders ignore.
class RateController {
public:
    RateController(double target_bps, QuantizerMode mode);

    long budget() const noexcept { return budget_; }
    long carry() const noexcept { return carry_; }

    /// Trims or pads the payload for this frame and updates the carry.
    /// On the final frame all remaining carry is stuffed. A short final frame
    /// gets a budget in proportion to the samples it holds.
    void apply(FrameStream& frame, bool last, std::size_t samples = kFrameSize);

    /// Debits bits spent outside the frames (the file header).
    void charge(long bits) noexcept { carry_ -= bits; }

    /// Smallest per-frame budget that always fits a frame header.
    static long minimum_budget(QuantizerMode mode);

private:
    QuantizerMode mode_;
    long budget_;
    long carry_ = 0;
};

} // namespace avdz
