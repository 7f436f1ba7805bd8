#pragma once

#include <cstdint>
#include <vector>

#include "pnfv/common.hpp"
#include "pnfv/schemes/common.hpp"
#include "pnfv/sim/frame.hpp"

namespace pnfv::sim {

// One overlay payload unit. 3-byte header: scheme id in the high nibble of
// byte 0, unit id in the remaining 20 bits, big-endian.
//
// Body by scheme:
//   bgn            exactly 96 bytes - three 32-byte elements, in order
//                  allow branch (source level), deny branch (source level),
//                  match result (target level)
//   fhe/peks/state u16 ciphertext count, then per ciphertext u16 length
//                  prefix + bytes
struct PayloadUnit {
    schemes::SchemeId scheme = schemes::SchemeId::bgn;
    uint32_t id = 0;  // policy index, or state-table entry id
    Bytes body;
};

inline constexpr size_t kUnitHeaderBytes = 3;
inline constexpr size_t kBgnUnitBodyBytes = 96;
inline constexpr uint32_t kMaxUnitId = (uint32_t(1) << 20) - 1;

inline void encode_unit(Bytes& out, const PayloadUnit& u) {
    if (u.id > kMaxUnitId) throw WireError("payload unit id exceeds 20 bits");
    if (u.scheme == schemes::SchemeId::bgn && u.body.size() != kBgnUnitBodyBytes)
        throw WireError("unexpected body size for a fixed-size unit");
    out.push_back(uint8_t((uint8_t(u.scheme) << 4) | (u.id >> 16)));
    out.push_back(uint8_t(u.id >> 8));
    out.push_back(uint8_t(u.id));
    out.insert(out.end(), u.body.begin(), u.body.end());
}

// Count + length-prefixed ciphertext list, the body format of every
// variable-size unit.
inline Bytes encode_ct_list(const std::vector<Bytes>& cts) {
    if (cts.size() > 0xffff) throw WireError("too many ciphertexts for one unit");
    Bytes out;
    put_u16(out, uint16_t(cts.size()));
    for (const auto& ct : cts) {
        if (ct.size() > 0xffff) throw WireError("ciphertext too long for one unit");
        put_u16(out, uint16_t(ct.size()));
        out.insert(out.end(), ct.begin(), ct.end());
    }
    return out;
}

inline std::vector<Bytes> decode_ct_list(const Bytes& body) {
    if (body.size() < 2) throw WireError("ciphertext list shorter than its count");
    size_t off = 0;
    uint16_t count = get_u16(body.data());
    off += 2;
    std::vector<Bytes> cts;
    cts.reserve(count);
    for (uint16_t k = 0; k < count; ++k) {
        if (off + 2 > body.size()) throw WireError("ciphertext list truncated");
        uint16_t len = get_u16(body.data() + off);
        off += 2;
        if (off + len > body.size()) throw WireError("ciphertext list truncated");
        cts.emplace_back(body.begin() + off, body.begin() + off + len);
        off += len;
    }
    if (off != body.size()) throw WireError("trailing bytes after ciphertext list");
    return cts;
}

// x' = outer IP header || original frame of x || payload units. The outer
// MAC header is deliberately absent; the overlay hop is point-to-point.
struct EncapsulatedPacket {
    Bytes inner;
    std::vector<PayloadUnit> units;
};

inline Bytes encapsulate(const EncapsulatedPacket& pkt, uint32_t src_ip, uint32_t dst_ip) {
    if (pkt.inner.size() < kMinFrameBytes) throw WireError("inner frame shorter than 34 bytes");
    if (pkt.inner.size() != kMacHeaderBytes + get_u16(pkt.inner.data() + kIpOffset + 2))
        throw WireError("inner frame length disagrees with its header");
    Bytes out(kIpHeaderBytes, 0);
    out.insert(out.end(), pkt.inner.begin(), pkt.inner.end());
    for (const auto& u : pkt.units) encode_unit(out, u);
    if (out.size() > 0xffff) throw WireError("encapsulated packet exceeds 64 KiB");
    write_ipv4_header(out.data(), src_ip, dst_ip, kProtoIpEncap, uint16_t(out.size()));
    return out;
}

inline EncapsulatedPacket decapsulate(const Bytes& wire) {
    if (wire.size() < kIpHeaderBytes) throw WireError("outer header truncated");
    if ((wire[0] >> 4) != 4) throw WireError("outer header is not IPv4");
    if (wire[9] != kProtoIpEncap) throw WireError("outer protocol is not encapsulation");
    if (get_u16(wire.data() + 2) != wire.size()) throw WireError("outer length mismatch");

    size_t off = kIpHeaderBytes;
    if (wire.size() - off < kMinFrameBytes) throw WireError("inner frame truncated");
    size_t inner_len = kMacHeaderBytes + get_u16(wire.data() + off + kIpOffset + 2);
    if (inner_len < kMinFrameBytes || off + inner_len > wire.size())
        throw WireError("inner frame length out of bounds");

    EncapsulatedPacket pkt;
    pkt.inner.assign(wire.begin() + off, wire.begin() + off + inner_len);
    off += inner_len;

    while (off < wire.size()) {
        if (wire.size() - off < kUnitHeaderBytes) throw WireError("payload unit header truncated");
        uint8_t nibble = wire[off] >> 4;
        if (nibble < uint8_t(schemes::SchemeId::fhe) || nibble > uint8_t(schemes::SchemeId::state))
            throw WireError("unknown scheme id in payload unit");
        PayloadUnit u;
        u.scheme = schemes::SchemeId(nibble);
        u.id = (uint32_t(wire[off] & 0x0f) << 16) | (uint32_t(wire[off + 1]) << 8) | wire[off + 2];
        off += kUnitHeaderBytes;
        size_t body_len;
        if (u.scheme == schemes::SchemeId::bgn) {
            body_len = kBgnUnitBodyBytes;
        } else {
            if (wire.size() - off < 2) throw WireError("payload unit body truncated");
            uint16_t count = get_u16(wire.data() + off);
            body_len = 2;
            for (uint16_t k = 0; k < count; ++k) {
                if (wire.size() - off < body_len + 2) throw WireError("payload unit body truncated");
                body_len += 2 + get_u16(wire.data() + off + body_len);
            }
        }
        if (wire.size() - off < body_len) throw WireError("payload unit body truncated");
        u.body.assign(wire.begin() + off, wire.begin() + off + body_len);
        off += body_len;
        pkt.units.push_back(std::move(u));
    }
    return pkt;
}

}  // namespace pnfv::sim
