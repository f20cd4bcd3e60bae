#include "avdz/coder.hpp"

#include "avdz/avdz.hpp"
#include "avdz/ezw.hpp"
#include "avdz/spiht.hpp"

#include <array>

namespace avdz {
namespace {

constexpr std::array<std::string_view, kCoderCount> kNames = {
    "ezw", "mezw", "spiht", "spiht-ordered", "spiht-modo", "mspiht", "avdz"};

SpihtVariant spiht_variant(CoderId id) {
    switch (id) {
    case CoderId::SpihtOrdered: return SpihtVariant::Ordered;
    case CoderId::SpihtModO: return SpihtVariant::ModifiedO;
    case CoderId::Mspiht: return SpihtVariant::Merged;
    default: return SpihtVariant::Baseline;
    }
}

} // namespace

std::string_view coder_name(CoderId id) { return kNames[static_cast<int>(id)]; }

std::optional<CoderId> parse_coder(std::string_view name) {
    for (int i = 0; i < kCoderCount; ++i)
        if (kNames[i] == name) return static_cast<CoderId>(i);
    return std::nullopt;
}

std::optional<CoderId> coder_from_id(unsigned value) {
    if (value >= static_cast<unsigned>(kCoderCount)) return std::nullopt;
    return static_cast<CoderId>(value);
}

bool uses_ordering(CoderId id) { return id != CoderId::Ezw && id != CoderId::Spiht; }

Reencoded reencode(CoderId id, const IntMap& map) {
    Reencoded out;
    if (uses_ordering(id)) out.side.ordering = ordered_rows(map);
    const RowOrder rows = uses_ordering(id) ? RowOrder(out.side.ordering) : baseline_rows();
    switch (id) {
    case CoderId::Ezw:
    case CoderId::Mezw: out.payload = ezw_encode_rows(map, rows); break;
    case CoderId::Avdz: out.payload = avdz_encode_rows(map, avdz_rows(rows)); break;
    default: out.payload = spiht_encode_rows(map, rows, spiht_variant(id)); break;
    }
    out.side.last_step_level = out.payload.last_step_level;
    return out;
}

RealMap redecode(CoderId id, const BitBuffer& payload, const SideInfo& side) {
    const RowOrder rows = uses_ordering(id) ? RowOrder(side.ordering) : baseline_rows();
    switch (id) {
    case CoderId::Ezw:
    case CoderId::Mezw: return ezw_decode_rows(payload, side.last_step_level, rows);
    case CoderId::Avdz: return avdz_decode_rows(payload, side.last_step_level, avdz_rows(rows));
    default: return spiht_decode_rows(payload, side.last_step_level, rows, spiht_variant(id));
    }
}

} // namespace avdz
