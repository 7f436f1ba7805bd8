#pragma once

#include <cstdint>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace pnfv {

using Bytes = std::vector<uint8_t>;
using u128 = unsigned __int128;

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public Error {
public:
    using Error::Error;
};

class DlogNotFound : public Error {
public:
    using Error::Error;
};

class LevelMismatch : public Error {
public:
    using Error::Error;
};

class IntegrityError : public Error {
public:
    using Error::Error;
};

class CorruptedPacket : public Error {
public:
    using Error::Error;
};

class WireError : public Error {
public:
    using Error::Error;
};

class UnknownEntry : public Error {
public:
    using Error::Error;
};

class Unsupported : public Error {
public:
    using Error::Error;
};

// Big-endian store/load helpers. All wire formats in this project are
// fixed-width big-endian.
inline void put_u16(Bytes& out, uint16_t v) {
    out.push_back(uint8_t(v >> 8));
    out.push_back(uint8_t(v));
}

inline void put_u32(Bytes& out, uint32_t v) {
    out.push_back(uint8_t(v >> 24));
    out.push_back(uint8_t(v >> 16));
    out.push_back(uint8_t(v >> 8));
    out.push_back(uint8_t(v));
}

inline void put_u64(Bytes& out, uint64_t v) {
    put_u32(out, uint32_t(v >> 32));
    put_u32(out, uint32_t(v));
}

inline uint16_t get_u16(const uint8_t* p) {
    return uint16_t(uint16_t(p[0]) << 8 | p[1]);
}

inline uint32_t get_u32(const uint8_t* p) {
    return uint32_t(p[0]) << 24 | uint32_t(p[1]) << 16 | uint32_t(p[2]) << 8 | p[3];
}

inline uint64_t get_u64(const uint8_t* p) {
    return uint64_t(get_u32(p)) << 32 | get_u32(p + 4);
}

inline std::string to_hex(const Bytes& b) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(b.size() * 2);
    for (uint8_t c : b) {
        s.push_back(digits[c >> 4]);
        s.push_back(digits[c & 0xf]);
    }
    return s;
}

inline Bytes from_hex(const std::string& s) {
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (s.size() % 2 != 0) throw ParseError("hex string has odd length");
    Bytes out;
    out.reserve(s.size() / 2);
    for (size_t i = 0; i < s.size(); i += 2) {
        int hi = nib(s[i]), lo = nib(s[i + 1]);
        if (hi < 0 || lo < 0) throw ParseError("invalid hex digit");
        out.push_back(uint8_t(hi << 4 | lo));
    }
    return out;
}

// Process-wide randomness for key generation and ciphertext nonces.
// Thread-local so concurrent encryptors never contend or interleave streams.
inline uint64_t random_u64() {
    thread_local std::mt19937_64 gen = [] {
        std::random_device rd;
        std::seed_seq seq{rd(), rd(), rd(), rd()};
        return std::mt19937_64(seq);
    }();
    return gen();
}

}  // namespace pnfv
