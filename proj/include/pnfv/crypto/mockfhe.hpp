#pragma once

#include <vector>

#include "pnfv/crypto/counters.hpp"
#include "pnfv/crypto/hash.hpp"

namespace pnfv::crypto {

// Mock fully-homomorphic backend: ciphertexts carry the plaintext in a
// sealed slot together with a freshness nonce, and every arithmetic op is
// evaluated directly on the sealed value. Unlimited depth, exact results,
// ZERO security; this exists so the arithmetic-circuit pipeline can be
// exercised and so a real FHE library slots in behind the same surface.
class MockFhe {
public:
    struct Ciphertext {
        int64_t sealed = 0;
        uint64_t nonce = 0;
        uint32_t key_id = 0;
    };

    static constexpr size_t kCiphertextBytes = 20;  // sealed (8) || nonce (8) || key id (4)

    static MockFhe keygen() {
        MockFhe f;
        f.key_id_ = uint32_t(random_u64() | 1);
        f.has_secret_ = true;
        return f;
    }

    MockFhe public_view() const {
        MockFhe pub = *this;
        pub.has_secret_ = false;
        return pub;
    }

    bool has_secret() const { return has_secret_; }
    uint32_t key_id() const { return key_id_; }

    void set_counters(OpCounters* c) { counters_ = c; }

    Ciphertext encrypt(int64_t v) const {
        if (counters_) counters_->encryptions++;
        return {v, random_u64(), key_id_};
    }

    int64_t decrypt(const Ciphertext& c) const {
        if (!has_secret_) throw Error("decryption requires the secret key");
        check(c);
        if (counters_) counters_->decryptions++;
        return c.sealed;
    }

    Ciphertext add(const Ciphertext& a, const Ciphertext& b) const {
        check(a), check(b);
        return wrap(int64_t(uint64_t(a.sealed) + uint64_t(b.sealed)));
    }

    Ciphertext sub(const Ciphertext& a, const Ciphertext& b) const {
        check(a), check(b);
        return wrap(int64_t(uint64_t(a.sealed) - uint64_t(b.sealed)));
    }

    Ciphertext mul(const Ciphertext& a, const Ciphertext& b) const {
        check(a), check(b);
        return wrap(int64_t(uint64_t(a.sealed) * uint64_t(b.sealed)));
    }

    Ciphertext add_plain(const Ciphertext& a, int64_t v) const {
        check(a);
        return wrap(int64_t(uint64_t(a.sealed) + uint64_t(v)));
    }

    Ciphertext mul_plain(const Ciphertext& a, int64_t v) const {
        check(a);
        return wrap(int64_t(uint64_t(a.sealed) * uint64_t(v)));
    }

    // Binary decomposition as an evaluation op, standing in for the bit-
    // extraction circuit a real FHE scheme would run between policy stages.
    std::vector<Ciphertext> to_bits(const Ciphertext& a, unsigned w) const {
        check(a);
        if (w == 0 || w > 32) throw Error("bit width must be 1..32");
        std::vector<Ciphertext> bits;
        bits.reserve(w);
        for (unsigned k = 0; k < w; ++k) bits.push_back(wrap((a.sealed >> k) & 1));
        return bits;
    }

    Bytes serialize(const Ciphertext& c) const {
        Bytes out;
        out.reserve(kCiphertextBytes);
        put_u64(out, uint64_t(c.sealed));
        put_u64(out, c.nonce);
        put_u32(out, c.key_id);
        return out;
    }

    Ciphertext parse(const uint8_t* p, size_t len) const {
        if (len < kCiphertextBytes) throw WireError("ciphertext buffer too short");
        Ciphertext c{int64_t(get_u64(p)), get_u64(p + 8), get_u32(p + 16)};
        check(c);
        return c;
    }

private:
    void check(const Ciphertext& c) const {
        if (c.key_id != key_id_) throw Error("ciphertext belongs to a different key");
    }

    Ciphertext wrap(int64_t v) const { return {v, random_u64(), key_id_}; }

    uint32_t key_id_ = 0;
    bool has_secret_ = false;
    OpCounters* counters_ = nullptr;
};

}  // namespace pnfv::crypto
