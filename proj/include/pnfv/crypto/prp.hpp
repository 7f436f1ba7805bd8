#pragma once

#include <numeric>
#include <vector>

#include "pnfv/crypto/hash.hpp"

namespace pnfv::crypto {

// Keyed pseudorandom permutation of positions 0..n-1: Fisher-Yates driven by
// a PRF stream over (key, nonce). Deterministic for a fixed pair, and the
// API deliberately exposes only the forward direction; parties that shuffle
// never need (and never get) the inverse.

struct PrpKey {
    uint64_t hi = 0;
    uint64_t lo = 0;

    static PrpKey generate() { return {random_u64(), random_u64()}; }
};

class Permutation {
public:
    Permutation(const PrpKey& key, uint64_t nonce, uint32_t n) : pi_(n) {
        std::iota(pi_.begin(), pi_.end(), 0u);
        uint64_t state = splitmix64(key.hi ^ splitmix64(key.lo ^ splitmix64(nonce)));
        auto next = [&state] {
            state += 0x9e3779b97f4a7c15ull;
            return splitmix64(state);
        };
        for (uint32_t i = n; i > 1; --i) std::swap(pi_[i - 1], pi_[next() % i]);
    }

    uint32_t size() const { return uint32_t(pi_.size()); }

    // Destination position of input position i.
    uint32_t image(uint32_t i) const { return pi_.at(i); }

    template <class T>
    std::vector<T> apply(const std::vector<T>& in) const {
        if (in.size() != pi_.size()) throw Error("permutation size mismatch");
        std::vector<T> out(in.size());
        for (size_t i = 0; i < in.size(); ++i) out[pi_[i]] = in[i];
        return out;
    }

    bool operator==(const Permutation&) const = default;

private:
    std::vector<uint32_t> pi_;
};

}  // namespace pnfv::crypto
