#pragma once

#include <array>
#include <cstdint>
#include <cstring>

#include "pnfv/common.hpp"

namespace pnfv::crypto {

// Stable 128-bit mixing hash (splitmix64 finalizer over absorbed blocks).
// Stands in for the random-oracle hashes of the protocol; it is NOT
// collision resistant against adversaries, which matches the explicitly
// insecure evaluation backend. Output is identical across runs, platforms
// and compilers, which the byte-exact wire tests rely on.

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct Digest128 {
    uint64_t hi = 0;
    uint64_t lo = 0;

    bool operator==(const Digest128&) const = default;

    std::array<uint8_t, 16> bytes() const {
        std::array<uint8_t, 16> out;
        for (int i = 0; i < 8; ++i) out[i] = uint8_t(hi >> (56 - 8 * i));
        for (int i = 0; i < 8; ++i) out[8 + i] = uint8_t(lo >> (56 - 8 * i));
        return out;
    }
};

// domain separates uses (key derivation, PEKS digests, masks, tags).
inline Digest128 hash128(const uint8_t* data, size_t len, uint64_t domain) {
    uint64_t a = splitmix64(domain ^ 0x504e465648415348ull);
    uint64_t b = splitmix64(a ^ len);
    size_t i = 0;
    while (i + 8 <= len) {
        uint64_t w;
        std::memcpy(&w, data + i, 8);
        a = splitmix64(a ^ w);
        b = splitmix64(b + (a ^ 0x9e3779b97f4a7c15ull));
        i += 8;
    }
    uint64_t tail = 0;
    for (size_t k = 0; i + k < len; ++k) tail |= uint64_t(data[i + k]) << (8 * k);
    a = splitmix64(a ^ tail ^ (uint64_t(len) << 56));
    b = splitmix64(b + a);
    a = splitmix64(a ^ (b >> 32));
    return {a, b};
}

inline Digest128 hash128(const Bytes& data, uint64_t domain) {
    return hash128(data.data(), data.size(), domain);
}

inline u128 digest_to_u128(const Digest128& d) {
    return (u128(d.hi) << 64) | d.lo;
}

}  // namespace pnfv::crypto
