#pragma once

#include <cstdint>

#include "pnfv/common.hpp"

namespace pnfv::netfn {

// Arithmetic comparison gadgets over w-bit operands, built only from the
// per-bit products that a homomorphic circuit can evaluate. Each returns 0
// or 1 as an integer.
//
// Let a_k, b_k be the k-th bits and c_k = a_k*b_k + (1-a_k)*(1-b_k) the
// per-bit agreement term.

// Product of all agreement terms: 1 iff a == b.
inline uint64_t bit_eq(uint64_t a, uint64_t b, unsigned w) {
    if (w == 0 || w > 32) throw Error("bit width must be 1..32");
    uint64_t acc = 1;
    for (unsigned k = 0; k < w; ++k) {
        uint64_t ak = (a >> k) & 1, bk = (b >> k) & 1;
        acc *= ak * bk + (1 - ak) * (1 - bk);
    }
    return acc;
}

// Sum of disagreement-at-the-top-most-differing-bit terms plus the all-equal
// product: 1 iff a >= b. Terms are mutually exclusive, so the sum is 0 or 1.
inline uint64_t bit_geq(uint64_t a, uint64_t b, unsigned w) {
    if (w == 0 || w > 32) throw Error("bit width must be 1..32");
    uint64_t acc = 0;
    uint64_t prefix = 1;  // product of agreement terms above the current bit
    for (int k = int(w) - 1; k >= 0; --k) {
        uint64_t ak = (a >> k) & 1, bk = (b >> k) & 1;
        acc += prefix * ak * (1 - bk);
        prefix *= ak * bk + (1 - ak) * (1 - bk);
    }
    return acc + prefix;
}

// Same gadget with the operand roles swapped: 1 iff a <= b.
inline uint64_t bit_leq(uint64_t a, uint64_t b, unsigned w) {
    return bit_geq(b, a, w);
}

}  // namespace pnfv::netfn
