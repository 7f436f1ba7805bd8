#pragma once

#include <cstdint>
#include <string>

#include "pnfv/common.hpp"

namespace pnfv::schemes {

// Wire identifiers for the processing schemes. The values fit the 4-bit
// scheme nibble of the payload-unit header; `state` marks table-hit units.
enum class SchemeId : uint8_t { fhe = 1, bgn = 2, peks = 3, state = 4 };

inline const char* to_string(SchemeId s) {
    switch (s) {
        case SchemeId::fhe: return "fhe";
        case SchemeId::bgn: return "bgn";
        case SchemeId::peks: return "peks";
        case SchemeId::state: return "state";
    }
    return "?";
}

inline SchemeId scheme_from_string(const std::string& s) {
    if (s == "fhe") return SchemeId::fhe;
    if (s == "bgn") return SchemeId::bgn;
    if (s == "peks") return SchemeId::peks;
    throw ParseError("unknown scheme name: " + s);
}

// Keyword bytes for searchable encryption and the matching PKE payloads.
// A field value bound to its position is 4-byte big-endian value followed
// by 2-byte big-endian index; a bare position is the 2-byte index alone.
inline Bytes kw_value_index(uint32_t value, uint16_t index) {
    Bytes out;
    put_u32(out, value);
    put_u16(out, index);
    return out;
}

inline Bytes kw_index(uint16_t index) {
    Bytes out;
    put_u16(out, index);
    return out;
}

struct ValueIndex {
    uint32_t value = 0;
    uint16_t index = 0;
};

inline ValueIndex decode_value_index(const Bytes& b) {
    if (b.size() != 6) throw CorruptedPacket("value/index record must be 6 bytes");
    return {get_u32(b.data()), get_u16(b.data() + 4)};
}

// Packing of value||index into one integer message for homomorphic
// payload branches: value in the high 16 bits, field index in the low 16.
// Only values below 2^16 fit; wider action targets use the vector path.
inline uint32_t pack_value_index(uint32_t value, uint16_t index) {
    if (value >= (1u << 16))
        throw Unsupported("packed payload branch requires an action value below 2^16");
    return (value << 16) | index;
}

inline ValueIndex unpack_value_index(uint64_t packed) {
    if (packed >= (1ull << 32)) throw CorruptedPacket("packed value/index out of range");
    return {uint32_t(packed >> 16), uint16_t(packed & 0xffff)};
}

}  // namespace pnfv::schemes
