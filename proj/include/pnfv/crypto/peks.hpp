#pragma once

#include <array>

#include "pnfv/crypto/counters.hpp"
#include "pnfv/crypto/group.hpp"
#include "pnfv/crypto/hash.hpp"

namespace pnfv::crypto {

// Public-key encryption with keyword search over a prime-order pairing
// group (tracked in the exponent, like everything on this backend).
//
//   keys:      secret s, public pk = g^s
//   E(w)     = (g^r, H2(e(H1(w), pk)^r))       randomized
//   T(w)     = H1(w)^s                          deterministic
//   test     : H2(e(T, g^r)) == second component
//
// Search words are opaque byte strings; callers fix the encoding.

struct PeksParams {
    uint64_t prime_lo = 1ull << 61;
    uint64_t prime_hi = 1ull << 62;
};

class Peks {
public:
    struct Ciphertext {
        ExpPairingGroup::Elem a;  // g^r
        Digest128 b;              // H2(pairing power)
    };

    struct Trapdoor {
        ExpPairingGroup::Elem t;

        bool operator==(const Trapdoor&) const = default;
    };

    static constexpr size_t kCiphertextBytes = ExpPairingGroup::kElemBytes + 16;
    static constexpr size_t kTrapdoorBytes = ExpPairingGroup::kElemBytes;

    static Peks keygen(const PeksParams& params = {}) {
        Peks p;
        p.group_ = ExpPairingGroup(random_prime(params.prime_lo, params.prime_hi));
        p.s_ = 1 + p.group_.random_exponent() % (p.group_.order() - 1);
        p.pk_ = p.group_.pow(p.generator(), p.s_);
        p.has_secret_ = true;
        return p;
    }

    Peks public_view() const {
        Peks pub = *this;
        pub.has_secret_ = false;
        pub.s_ = 0;
        return pub;
    }

    bool has_secret() const { return has_secret_; }
    const ExpPairingGroup& group() const { return group_; }

    void set_counters(OpCounters* c) { counters_ = c; }

    Ciphertext encrypt(const Bytes& word) const {
        u128 r = 1 + group_.random_exponent() % (group_.order() - 1);
        auto a = group_.pow(generator(), r);
        auto t = group_.pow(group_.pair(hash_to_group(word), pk_), r);
        if (counters_) counters_->pairings++, counters_->encryptions++;
        return {a, digest_of(t)};
    }

    Trapdoor trapdoor(const Bytes& word) const {
        if (!has_secret_) throw Error("trapdoor generation requires the secret key");
        return {group_.pow(hash_to_group(word), s_)};
    }

    bool test(const Ciphertext& ct, const Trapdoor& td) const {
        auto t = group_.pair(td.t, ct.a);
        if (counters_) counters_->pairings++, counters_->tests++;
        return digest_of(t) == ct.b;
    }

    Bytes serialize(const Ciphertext& ct) const {
        Bytes out;
        out.reserve(kCiphertextBytes);
        group_.serialize(ct.a, out);
        for (uint8_t byte : ct.b.bytes()) out.push_back(byte);
        return out;
    }

    Bytes serialize(const Trapdoor& td) const {
        Bytes out;
        out.reserve(kTrapdoorBytes);
        group_.serialize(td.t, out);
        return out;
    }

    Ciphertext parse_ciphertext(const uint8_t* p, size_t len) const {
        if (len < kCiphertextBytes) throw WireError("search ciphertext buffer too short");
        Ciphertext ct;
        ct.a = group_.parse(p, Level::source);
        ct.b.hi = get_u64(p + ExpPairingGroup::kElemBytes);
        ct.b.lo = get_u64(p + ExpPairingGroup::kElemBytes + 8);
        return ct;
    }

    Trapdoor parse_trapdoor(const uint8_t* p, size_t len) const {
        if (len < kTrapdoorBytes) throw WireError("trapdoor buffer too short");
        return {group_.parse(p, Level::source)};
    }

    Bytes key_bytes() const {
        Bytes out;
        put_u64(out, uint64_t(group_.order() >> 64));
        put_u64(out, uint64_t(group_.order()));
        group_.serialize(pk_, out);
        out.push_back(has_secret_ ? 1 : 0);
        if (has_secret_) {
            put_u64(out, uint64_t(s_ >> 64));
            put_u64(out, uint64_t(s_));
        }
        return out;
    }

    static Peks from_key_bytes(const uint8_t* p, size_t len) {
        if (len < 16 + ExpPairingGroup::kElemBytes + 1) throw WireError("key payload too short");
        Peks pk;
        pk.group_ = ExpPairingGroup((u128(get_u64(p)) << 64) | get_u64(p + 8));
        p += 16;
        pk.pk_ = pk.group_.parse(p, Level::source);
        p += ExpPairingGroup::kElemBytes;
        pk.has_secret_ = (*p++ != 0);
        if (pk.has_secret_) {
            if (len < 16 + ExpPairingGroup::kElemBytes + 17) throw WireError("key payload too short");
            pk.s_ = (u128(get_u64(p)) << 64) | get_u64(p + 8);
        }
        return pk;
    }

private:
    static constexpr uint64_t kDomH1 = 0x70656b732e6831ull;
    static constexpr uint64_t kDomH2 = 0x70656b732e6832ull;

    ExpPairingGroup::Elem generator() const { return group_.make(1, Level::source); }

    ExpPairingGroup::Elem hash_to_group(const Bytes& word) const {
        u128 e = 1 + digest_to_u128(hash128(word, kDomH1)) % (group_.order() - 1);
        return group_.make(e, Level::source);
    }

    Digest128 digest_of(const ExpPairingGroup::Elem& t) const {
        Bytes buf;
        group_.serialize(t, buf);
        return hash128(buf, kDomH2);
    }

    ExpPairingGroup group_{3};
    u128 s_ = 0;
    ExpPairingGroup::Elem pk_;
    bool has_secret_ = false;
    OpCounters* counters_ = nullptr;
};

}  // namespace pnfv::crypto
