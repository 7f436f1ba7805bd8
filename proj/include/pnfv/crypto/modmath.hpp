#pragma once

#include <cassert>
#include <cstdint>

#include "pnfv/common.hpp"

namespace pnfv::crypto {

// a*b mod m for moduli up to 2^81. The full 128x128 product does not fit,
// so split a at 34 bits; with m < 2^81 every partial product stays below
// 2^128 (a_hi*b < 2^47 * 2^81). Group orders here are < 2^68.
inline u128 mulmod(u128 a, u128 b, u128 m) {
    a %= m;
    b %= m;
    constexpr u128 kMask34 = (u128(1) << 34) - 1;
    u128 a_hi = a >> 34;
    u128 a_lo = a & kMask34;
    u128 hi = (a_hi * b) % m;
    hi = (hi << 34) % m;
    return (hi + a_lo * b % m) % m;
}

inline u128 addmod(u128 a, u128 b, u128 m) {
    a %= m;
    b %= m;
    u128 s = a + b;
    if (s >= m) s -= m;
    return s;
}

inline u128 submod(u128 a, u128 b, u128 m) {
    a %= m;
    b %= m;
    return a >= b ? a - b : m - b + a;
}

inline u128 powmod(u128 base, u128 exp, u128 m) {
    u128 r = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

inline u128 gcd_u128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Deterministic Miller-Rabin for 64-bit inputs. The first twelve prime bases
// are a proven-complete witness set below 3.3 * 10^24.
inline bool is_prime_u64(uint64_t x) {
    if (x < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (x % p == 0) return x == p;
    }
    uint64_t d = x - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u128 v = powmod(a, d, x);
        if (v == 1 || v == x - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            v = mulmod(v, v, x);
            if (v == x - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// Uniform prime from [lo, hi). Rejection sampling; the prime density in the
// ranges used here (34-bit, 62-bit) makes this terminate almost immediately.
inline uint64_t random_prime(uint64_t lo, uint64_t hi) {
    assert(hi > lo + 1);
    for (;;) {
        uint64_t x = lo + random_u64() % (hi - lo);
        x |= 1;
        if (x >= lo && x < hi && is_prime_u64(x)) return x;
    }
}

}  // namespace pnfv::crypto
