#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace avdz {

/// A bit sequence stored MSB-first in bytes; bits past bit_count are zero.
struct BitBuffer {
    std::vector<std::uint8_t> bytes;
    std::size_t bit_count = 0;

    bool bit(std::size_t i) const { return (bytes[i >> 3] >> (7 - (i & 7))) & 1u; }

    /// First n bits (n is clamped to bit_count).
    BitBuffer prefix(std::size_t n) const;

    friend bool operator==(const BitBuffer&, const BitBuffer&) = default;
};

class BitWriter {
public:
    /// Appends the low `width` bits of value, MSB first. width in [0, 32].
    void put_bits(std::uint32_t value, int width);
    void put_bit(bool b) {
        if ((count_ & 7) == 0) bytes_.push_back(0);
        if (b) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (count_ & 7));
        ++count_;
    }
    void append(const BitBuffer& bits);
    void reserve(std::size_t bits) { bytes_.reserve((bits + 7) / 8); }

    std::size_t size() const noexcept { return count_; }
    const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }
    BitBuffer take();

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t count_ = 0;
};

/// MSB-first reader over a bounded bit range. Reading past the end throws
/// EndOfStream and leaves the position unchanged.
class BitReader {
public:
    BitReader(std::span<const std::uint8_t> bytes, std::size_t bit_count);
    explicit BitReader(const BitBuffer& buf) : BitReader(buf.bytes, buf.bit_count) {}

    std::uint32_t get_bits(int width);
    bool get_bit();

    std::size_t position() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return limit_ - pos_; }
    bool exhausted() const noexcept { return pos_ >= limit_; }
    void skip(std::size_t nbits);

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t limit_;
    std::size_t pos_ = 0;
};

} // namespace avdz
