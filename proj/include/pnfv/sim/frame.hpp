#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "pnfv/common.hpp"
#include "pnfv/netfn/layout.hpp"
#include "pnfv/netfn/packet.hpp"

namespace pnfv::sim {

// Ethernet II + IPv4, no options (IHL = 5), so every offset is fixed.
inline constexpr size_t kMacHeaderBytes = 14;
inline constexpr size_t kIpHeaderBytes = 20;
inline constexpr size_t kMinFrameBytes = kMacHeaderBytes + kIpHeaderBytes;
inline constexpr size_t kIpOffset = kMacHeaderBytes;
inline constexpr size_t kTransportOffset = kMacHeaderBytes + kIpHeaderBytes;

inline constexpr uint8_t kProtoTcp = 6;
inline constexpr uint8_t kProtoUdp = 17;
inline constexpr uint8_t kProtoIpEncap = 4;  // IP-in-IP, used by the overlay

// TCP flag bits at byte 13 of the transport header.
inline constexpr uint8_t kTcpFin = 0x01;
inline constexpr uint8_t kTcpSyn = 0x02;
inline constexpr uint8_t kTcpAck = 0x10;

// RFC 791 ones'-complement sum over one 20-byte header, checksum field
// treated as zero.
inline uint16_t ipv4_checksum(const uint8_t* hdr) {
    uint32_t sum = 0;
    for (size_t i = 0; i < kIpHeaderBytes; i += 2) {
        if (i == 10) continue;
        sum += (uint32_t(hdr[i]) << 8) | hdr[i + 1];
    }
    while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
    return uint16_t(~sum);
}

inline void write_ipv4_header(uint8_t* hdr, uint32_t s_ip, uint32_t d_ip, uint8_t prot,
                              uint16_t total_length, uint8_t ttl = 64) {
    hdr[0] = 0x45;  // version 4, IHL 5
    hdr[1] = 0;
    hdr[2] = uint8_t(total_length >> 8);
    hdr[3] = uint8_t(total_length);
    hdr[4] = hdr[5] = hdr[6] = hdr[7] = 0;  // id, flags, fragment offset
    hdr[8] = ttl;
    hdr[9] = prot;
    hdr[10] = hdr[11] = 0;
    hdr[12] = uint8_t(s_ip >> 24);
    hdr[13] = uint8_t(s_ip >> 16);
    hdr[14] = uint8_t(s_ip >> 8);
    hdr[15] = uint8_t(s_ip);
    hdr[16] = uint8_t(d_ip >> 24);
    hdr[17] = uint8_t(d_ip >> 16);
    hdr[18] = uint8_t(d_ip >> 8);
    hdr[19] = uint8_t(d_ip);
    uint16_t ck = ipv4_checksum(hdr);
    hdr[10] = uint8_t(ck >> 8);
    hdr[11] = uint8_t(ck);
}

struct FrameSpec {
    std::array<uint8_t, 6> mac_dst{};
    std::array<uint8_t, 6> mac_src{};
    uint32_t s_ip = 0;
    uint32_t d_ip = 0;
    uint8_t prot = 0;
    uint8_t ttl = 64;
    Bytes transport;  // everything after the IP header
};

inline Bytes build_frame(const FrameSpec& s) {
    if (kIpHeaderBytes + s.transport.size() > 0xffff) throw Error("frame transport too long");
    Bytes f(kMinFrameBytes + s.transport.size());
    for (size_t i = 0; i < 6; ++i) f[i] = s.mac_dst[i], f[6 + i] = s.mac_src[i];
    f[12] = 0x08, f[13] = 0x00;  // EtherType IPv4
    write_ipv4_header(f.data() + kIpOffset, s.s_ip, s.d_ip, s.prot,
                      uint16_t(kIpHeaderBytes + s.transport.size()), s.ttl);
    std::copy(s.transport.begin(), s.transport.end(), f.begin() + kTransportOffset);
    return f;
}

// Minimal 20-byte TCP header: just ports, data offset and flags; the
// simulator never computes transport checksums.
inline Bytes build_tcp_frame(uint32_t s_ip, uint32_t d_ip, uint16_t s_port, uint16_t d_port,
                             uint8_t flags, const Bytes& payload = {}) {
    FrameSpec s;
    s.s_ip = s_ip;
    s.d_ip = d_ip;
    s.prot = kProtoTcp;
    s.transport.resize(20, 0);
    s.transport[0] = uint8_t(s_port >> 8);
    s.transport[1] = uint8_t(s_port);
    s.transport[2] = uint8_t(d_port >> 8);
    s.transport[3] = uint8_t(d_port);
    s.transport[12] = 0x50;  // data offset 5
    s.transport[13] = flags;
    s.transport[14] = 0xff;
    s.transport[15] = 0xff;  // window
    s.transport.insert(s.transport.end(), payload.begin(), payload.end());
    return build_frame(s);
}

inline Bytes build_udp_frame(uint32_t s_ip, uint32_t d_ip, uint16_t s_port, uint16_t d_port,
                             const Bytes& payload = {}) {
    FrameSpec s;
    s.s_ip = s_ip;
    s.d_ip = d_ip;
    s.prot = kProtoUdp;
    s.transport.resize(8, 0);
    s.transport[0] = uint8_t(s_port >> 8);
    s.transport[1] = uint8_t(s_port);
    s.transport[2] = uint8_t(d_port >> 8);
    s.transport[3] = uint8_t(d_port);
    uint16_t len = uint16_t(8 + payload.size());
    s.transport[4] = uint8_t(len >> 8);
    s.transport[5] = uint8_t(len);
    s.transport.insert(s.transport.end(), payload.begin(), payload.end());
    return build_frame(s);
}

// Parsed 5-tuple plus whatever transport detail the frame actually carries.
struct FrameFields {
    uint32_t s_ip = 0;
    uint32_t d_ip = 0;
    uint16_t s_port = 0;
    uint16_t d_port = 0;
    uint8_t prot = 0;
    bool has_ports = false;
    std::optional<uint8_t> tcp_flags;
};

inline FrameFields parse_frame(const Bytes& f) {
    if (f.size() < kMinFrameBytes) throw ParseError("truncated frame");
    const uint8_t* ip = f.data() + kIpOffset;
    if ((ip[0] >> 4) != 4) throw ParseError("not an IPv4 frame");
    FrameFields out;
    out.s_ip = get_u32(ip + 12);
    out.d_ip = get_u32(ip + 16);
    out.prot = ip[9];
    size_t transport_len = f.size() - kTransportOffset;
    if (transport_len >= 4) {
        out.has_ports = true;
        out.s_port = get_u16(f.data() + kTransportOffset);
        out.d_port = get_u16(f.data() + kTransportOffset + 2);
    }
    if (out.prot == kProtoTcp && transport_len >= 14)
        out.tcp_flags = f[kTransportOffset + 13];
    return out;
}

inline bool verify_checksum(const Bytes& f) {
    if (f.size() < kMinFrameBytes) throw ParseError("truncated frame");
    const uint8_t* ip = f.data() + kIpOffset;
    return get_u16(ip + 10) == ipv4_checksum(ip);
}

// The layout every middlebox processes under: the 5-tuple plus the virtual
// verdict tag. Connection state and table id live only in protocol-level
// appendix positions 7 and 8, never in the packet vector itself.
inline netfn::PacketLayout processing_layout() {
    return netfn::PacketLayout({
        {1, 32, "s_ip", false},
        {2, 32, "d_ip", false},
        {3, 16, "s_port", false},
        {4, 16, "d_port", false},
        {5, 8, "prot", false},
        {6, 16, "tag", true},
    });
}

inline constexpr uint16_t kTagFieldIndex = 6;
inline constexpr uint16_t kStateFieldIndex = 7;
inline constexpr uint16_t kIdFieldIndex = 8;

// 5-tuple into fields 1..5; every other layout field starts at zero.
inline netfn::Packet fields_from_frame(const Bytes& f, const netfn::PacketLayout& layout) {
    if (layout.size() < 5) throw Error("layout too narrow for a 5-tuple");
    FrameFields ff = parse_frame(f);
    netfn::Packet x = netfn::Packet::zero(layout);
    x.set(1, ff.s_ip);
    x.set(2, ff.d_ip);
    x.set(3, ff.s_port);
    x.set(4, ff.d_port);
    x.set(5, ff.prot);
    return x;
}

// Entry-side deletion rule: blank the 5-tuple in the frame that travels on,
// then fix the header checksum so the frame stays well-formed.
inline void zero_tuple(Bytes& f) {
    if (f.size() < kMinFrameBytes) throw ParseError("truncated frame");
    uint8_t* ip = f.data() + kIpOffset;
    ip[9] = 0;                                        // protocol
    for (size_t i = 12; i < 20; ++i) ip[i] = 0;       // both addresses
    if (f.size() - kTransportOffset >= 4)
        for (size_t i = 0; i < 4; ++i) f[kTransportOffset + i] = 0;  // ports
    uint16_t ck = ipv4_checksum(ip);
    ip[10] = uint8_t(ck >> 8);
    ip[11] = uint8_t(ck);
}

// Receiver-side inverse of zero_tuple: write the (decrypted) 5-tuple back
// into the frame before it is forwarded to its destination.
inline void restore_tuple(Bytes& f, const netfn::Packet& x) {
    if (f.size() < kMinFrameBytes) throw ParseError("truncated frame");
    uint8_t* ip = f.data() + kIpOffset;
    uint32_t s = x.get(1), d = x.get(2);
    ip[9] = uint8_t(x.get(5));
    ip[12] = uint8_t(s >> 24), ip[13] = uint8_t(s >> 16), ip[14] = uint8_t(s >> 8), ip[15] = uint8_t(s);
    ip[16] = uint8_t(d >> 24), ip[17] = uint8_t(d >> 16), ip[18] = uint8_t(d >> 8), ip[19] = uint8_t(d);
    if (f.size() - kTransportOffset >= 4) {
        f[kTransportOffset] = uint8_t(x.get(3) >> 8);
        f[kTransportOffset + 1] = uint8_t(x.get(3));
        f[kTransportOffset + 2] = uint8_t(x.get(4) >> 8);
        f[kTransportOffset + 3] = uint8_t(x.get(4));
    }
    uint16_t ck = ipv4_checksum(ip);
    ip[10] = uint8_t(ck >> 8);
    ip[11] = uint8_t(ck);
}

inline bool tuple_is_zero(const Bytes& f) {
    FrameFields ff = parse_frame(f);
    return ff.s_ip == 0 && ff.d_ip == 0 && ff.prot == 0 &&
           (!ff.has_ports || (ff.s_port == 0 && ff.d_port == 0));
}

}  // namespace pnfv::sim
