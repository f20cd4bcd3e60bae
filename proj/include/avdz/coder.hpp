#pragma once

#include "avdz/zerotree.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace avdz {

/// 3-bit coder id stored in every frame.
enum class CoderId : std::uint8_t {
    Ezw = 0,           // baseline EZW
    Mezw = 1,          // magnitude-ordered EZW
    Spiht = 2,         // baseline SPIHT
    SpihtOrdered = 3,  // magnitude-ordered SPIHT
    SpihtModO = 4,     // ordered + widened offspring sets
    Mspiht = 5,        // ordered + widened offspring + merged first passes
    Avdz = 6,
};

inline constexpr int kCoderCount = 7;

std::string_view coder_name(CoderId id);
std::optional<CoderId> parse_coder(std::string_view name);
std::optional<CoderId> coder_from_id(unsigned value);

/// True for coders whose row order travels as side information.
bool uses_ordering(CoderId id);

struct Reencoded {
    SideInfo side;
    Payload payload;
};

Reencoded reencode(CoderId id, const IntMap& map);
RealMap redecode(CoderId id, const BitBuffer& payload, const SideInfo& side);

} // namespace avdz
