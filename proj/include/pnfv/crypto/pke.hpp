#pragma once

#include <array>

#include "pnfv/crypto/counters.hpp"
#include "pnfv/crypto/group.hpp"
#include "pnfv/crypto/hash.hpp"

namespace pnfv::crypto {

// Probabilistic public-key encryption for short byte strings, hybrid style:
// an ephemeral shared group element masks the message through the hash and
// authenticates it with a 16-byte tag, so decryption under the wrong key is
// always flagged rather than returning garbage.

struct PkeParams {
    uint64_t prime_lo = 1ull << 61;
    uint64_t prime_hi = 1ull << 62;
};

class Pke {
public:
    struct Ciphertext {
        ExpPairingGroup::Elem c1;  // g^r
        Bytes body;                // message xor mask stream
        std::array<uint8_t, 16> tag;
    };

    static constexpr size_t kMaxMessageBytes = 64;
    static constexpr size_t kOverheadBytes = ExpPairingGroup::kElemBytes + 2 + 16;

    static Pke keygen(const PkeParams& params = {}) {
        Pke p;
        p.group_ = ExpPairingGroup(random_prime(params.prime_lo, params.prime_hi));
        p.sk_ = 1 + p.group_.random_exponent() % (p.group_.order() - 1);
        p.pk_ = p.group_.pow(p.generator(), p.sk_);
        p.has_secret_ = true;
        return p;
    }

    Pke public_view() const {
        Pke pub = *this;
        pub.has_secret_ = false;
        pub.sk_ = 0;
        return pub;
    }

    bool has_secret() const { return has_secret_; }

    void set_counters(OpCounters* c) { counters_ = c; }

    Ciphertext encrypt(const Bytes& msg) const {
        if (msg.size() > kMaxMessageBytes) throw Error("message exceeds block capacity");
        u128 r = 1 + group_.random_exponent() % (group_.order() - 1);
        Ciphertext ct;
        ct.c1 = group_.pow(generator(), r);
        auto shared = group_.pow(pk_, r);
        ct.body = mask(shared, msg);
        ct.tag = compute_tag(shared, ct.body);
        if (counters_) counters_->encryptions++;
        return ct;
    }

    Bytes decrypt(const Ciphertext& ct) const {
        if (!has_secret_) throw Error("decryption requires the secret key");
        if (counters_) counters_->decryptions++;
        auto shared = group_.pow(ct.c1, sk_);
        if (compute_tag(shared, ct.body) != ct.tag) throw IntegrityError("ciphertext fails authentication");
        return mask(shared, ct.body);
    }

    // c1 (32) || body length (2) || body || tag (16)
    Bytes serialize(const Ciphertext& ct) const {
        Bytes out;
        out.reserve(kOverheadBytes + ct.body.size());
        group_.serialize(ct.c1, out);
        put_u16(out, uint16_t(ct.body.size()));
        out.insert(out.end(), ct.body.begin(), ct.body.end());
        out.insert(out.end(), ct.tag.begin(), ct.tag.end());
        return out;
    }

    Ciphertext parse(const uint8_t* p, size_t len, size_t* consumed = nullptr) const {
        if (len < kOverheadBytes) throw WireError("ciphertext buffer too short");
        Ciphertext ct;
        ct.c1 = group_.parse(p, Level::source);
        size_t body_len = get_u16(p + ExpPairingGroup::kElemBytes);
        if (len < kOverheadBytes + body_len) throw WireError("ciphertext body truncated");
        const uint8_t* body = p + ExpPairingGroup::kElemBytes + 2;
        ct.body.assign(body, body + body_len);
        std::copy(body + body_len, body + body_len + 16, ct.tag.begin());
        if (consumed) *consumed = kOverheadBytes + body_len;
        return ct;
    }

    size_t serialized_size(size_t msg_len) const { return kOverheadBytes + msg_len; }

    Bytes key_bytes() const {
        Bytes out;
        put_u64(out, uint64_t(group_.order() >> 64));
        put_u64(out, uint64_t(group_.order()));
        group_.serialize(pk_, out);
        out.push_back(has_secret_ ? 1 : 0);
        if (has_secret_) {
            put_u64(out, uint64_t(sk_ >> 64));
            put_u64(out, uint64_t(sk_));
        }
        return out;
    }

    static Pke from_key_bytes(const uint8_t* p, size_t len) {
        if (len < 16 + ExpPairingGroup::kElemBytes + 1) throw WireError("key payload too short");
        Pke pk;
        pk.group_ = ExpPairingGroup((u128(get_u64(p)) << 64) | get_u64(p + 8));
        p += 16;
        pk.pk_ = pk.group_.parse(p, Level::source);
        p += ExpPairingGroup::kElemBytes;
        pk.has_secret_ = (*p++ != 0);
        if (pk.has_secret_) {
            if (len < 16 + ExpPairingGroup::kElemBytes + 17) throw WireError("key payload too short");
            pk.sk_ = (u128(get_u64(p)) << 64) | get_u64(p + 8);
        }
        return pk;
    }

private:
    static constexpr uint64_t kDomMask = 0x706b652e6d61736bull;
    static constexpr uint64_t kDomTag = 0x706b652e746167ull;

    ExpPairingGroup::Elem generator() const { return group_.make(1, Level::source); }

    Bytes mask(const ExpPairingGroup::Elem& shared, const Bytes& data) const {
        Bytes out = data;
        Bytes seed;
        group_.serialize(shared, seed);
        for (size_t block = 0; block * 16 < out.size(); ++block) {
            auto ks = hash128(seed.data(), seed.size(), kDomMask + block).bytes();
            for (size_t k = 0; k < 16 && block * 16 + k < out.size(); ++k) out[block * 16 + k] ^= ks[k];
        }
        return out;
    }

    std::array<uint8_t, 16> compute_tag(const ExpPairingGroup::Elem& shared, const Bytes& body) const {
        Bytes buf;
        group_.serialize(shared, buf);
        buf.insert(buf.end(), body.begin(), body.end());
        return hash128(buf, kDomTag).bytes();
    }

    ExpPairingGroup group_{3};
    u128 sk_ = 0;
    ExpPairingGroup::Elem pk_;
    bool has_secret_ = false;
    OpCounters* counters_ = nullptr;
};

}  // namespace pnfv::crypto
