#pragma once

#include <cstdint>

#include "pnfv/crypto/hash.hpp"
#include "pnfv/crypto/modmath.hpp"

namespace pnfv::crypto {

// Pairing levels. Source elements live in G1, target elements in G2; the
// bilinear map sends a pair of source elements to a target element.
enum class Level : uint8_t { source = 1, target = 2 };

// Exponent-tracking backend for a pair of cyclic groups (G1, G2) of common
// order `order` with a bilinear map e : G1 x G1 -> G2. An element is stored
// as its discrete log with respect to a canonical generator of its level,
// so the group operation is addition of exponents, exponentiation is
// multiplication, and the pairing is e(w1^a, w1^b) = w2^(a*b).
//
// Functionally exact and fast; offers no secrecy whatsoever (any element
// reveals its discrete log by construction). A concrete pairing-curve
// backend can replace this type anywhere it is used as a template
// parameter: the required interface is exactly the public surface below.
class ExpPairingGroup {
public:
    struct Elem {
        u128 exp = 0;
        Level level = Level::source;

        bool operator==(const Elem&) const = default;
    };

    ExpPairingGroup() = default;
    explicit ExpPairingGroup(u128 order) : order_(order) {
        if (order_ < 2) throw Error("group order must be at least 2");
    }

    u128 order() const { return order_; }

    Elem make(u128 exp, Level level) const { return {exp % order_, level}; }
    Elem identity(Level level) const { return {0, level}; }

    Elem op(const Elem& a, const Elem& b) const {
        if (a.level != b.level) throw LevelMismatch("group op across levels");
        return {addmod(a.exp, b.exp, order_), a.level};
    }

    Elem inv(const Elem& a) const { return {a.exp == 0 ? 0 : order_ - a.exp, a.level}; }

    Elem pow(const Elem& a, u128 k) const { return {mulmod(a.exp, k, order_), a.level}; }

    Elem pair(const Elem& a, const Elem& b) const {
        if (a.level != Level::source || b.level != Level::source)
            throw LevelMismatch("pairing inputs must both be source-level");
        return {mulmod(a.exp, b.exp, order_), Level::target};
    }

    // Fixed 32-byte big-endian encoding, matching the compressed size of a
    // production 256-bit curve point. The exponent occupies the low bytes.
    static constexpr size_t kElemBytes = 32;

    void serialize(const Elem& a, Bytes& out) const {
        for (int i = 0; i < 16; ++i) out.push_back(0);
        put_u64(out, uint64_t(a.exp >> 64));
        put_u64(out, uint64_t(a.exp));
    }

    Elem parse(const uint8_t* p, Level level) const {
        for (int i = 0; i < 16; ++i)
            if (p[i] != 0) throw WireError("group element encoding out of range");
        u128 e = (u128(get_u64(p + 16)) << 64) | get_u64(p + 24);
        if (e >= order_) throw WireError("group element exponent exceeds order");
        return {e, level};
    }

    // Uniform exponent in [0, order). Rejection-free reduction; the bias for
    // a 68-bit order against 128 random bits is beyond negligible.
    u128 random_exponent() const {
        u128 r = (u128(random_u64()) << 64) | random_u64();
        return r % order_;
    }

    // Cheap stable hash key for table lookups; full equality still decides.
    static uint64_t fingerprint(const Elem& e) {
        return splitmix64(uint64_t(e.exp) ^ splitmix64(uint64_t(e.exp >> 64)));
    }

    // Instantiate the composite-order setting: group of order q1*q2 with a
    // full-order generator g and an order-q1 generator h = u^q2.
    struct Setup;
    static Setup setup(uint64_t q1, uint64_t q2);

private:
    u128 order_ = 2;
};

struct ExpPairingGroup::Setup {
    ExpPairingGroup group;
    Elem g;
    Elem h;
};

inline ExpPairingGroup::Setup ExpPairingGroup::setup(uint64_t q1, uint64_t q2) {
    u128 n = u128(q1) * q2;
    ExpPairingGroup grp(n);
    auto random_unit = [&] {
        for (;;) {
            u128 e = grp.random_exponent();
            if (e != 0 && gcd_u128(e, n) == 1) return e;
        }
    };
    Elem g{random_unit(), Level::source};
    Elem u{random_unit(), Level::source};
    return {grp, g, grp.pow(u, q2)};
}

}  // namespace pnfv::crypto
