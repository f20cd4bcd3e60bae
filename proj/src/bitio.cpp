#include "avdz/bitio.hpp"

#include "avdz/errors.hpp"

#include <algorithm>

namespace avdz {

BitBuffer BitBuffer::prefix(std::size_t n) const {
    n = std::min(n, bit_count);
    BitBuffer out;
    out.bit_count = n;
    out.bytes.assign(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>((n + 7) / 8));
    if (n & 7) out.bytes.back() &= static_cast<std::uint8_t>(0xFFu << (8 - (n & 7)));
    return out;
}

void BitWriter::put_bits(std::uint32_t value, int width) {
    if (width < 0 || width > 32) throw ConfigError("put_bits: width out of range");
    if (width < 32 && (value >> width) != 0) throw ConfigError("put_bits: value does not fit width");
    for (int i = width - 1; i >= 0; --i) put_bit((value >> i) & 1u);
}

void BitWriter::append(const BitBuffer& bits) {
    if ((count_ & 7) == 0) {
        bytes_.insert(bytes_.end(), bits.bytes.begin(), bits.bytes.end());
        count_ += bits.bit_count;
        return;
    }
    for (std::size_t i = 0; i < bits.bit_count; ++i) put_bit(bits.bit(i));
}

BitBuffer BitWriter::take() {
    BitBuffer out{std::move(bytes_), count_};
    bytes_.clear();
    count_ = 0;
    return out;
}

BitReader::BitReader(std::span<const std::uint8_t> bytes, std::size_t bit_count)
    : bytes_(bytes), limit_(std::min(bit_count, bytes.size() * 8)) {}

bool BitReader::get_bit() {
    if (pos_ >= limit_) throw EndOfStream();
    const bool b = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1u;
    ++pos_;
    return b;
}

std::uint32_t BitReader::get_bits(int width) {
    if (width < 0 || width > 32) throw ConfigError("get_bits: width out of range");
    if (static_cast<std::size_t>(width) > limit_ - pos_) throw EndOfStream();
    std::uint32_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 1) | (get_bit() ? 1u : 0u);
    return v;
}

void BitReader::skip(std::size_t nbits) {
    if (nbits > limit_ - pos_) throw EndOfStream();
    pos_ += nbits;
}

} // namespace avdz
