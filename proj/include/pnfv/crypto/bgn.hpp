#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "pnfv/crypto/counters.hpp"
#include "pnfv/crypto/group.hpp"
#include "pnfv/crypto/hash.hpp"

namespace pnfv::crypto {

// Somewhat-homomorphic cryptosystem over a composite-order pairing group:
// unlimited additions at either level plus a single multiplication that
// moves a ciphertext pair from source to target level.
//
//   keys:    order n = q1*q2, generators g (order n) and h (order q1)
//   E(m)   = g^m * h^r for fresh random r
//   D(c)   : c^q1 = (g^q1)^m, recover m by baby-step giant-step
//
// Templated on the group backend; see ExpPairingGroup for the interface.

struct BgnParams {
    // Both primes are drawn from [2^33, 2^34). That keeps q2 above twice the
    // default message bound, so signed recovery over [-2^32, 2^32) is
    // unambiguous, while n = q1*q2 stays below 2^68 for the exponent ring.
    uint64_t prime_lo = 1ull << 33;
    uint64_t prime_hi = 1ull << 34;
    uint64_t msg_bound = 1ull << 32;  // encrypt accepts m < msg_bound
};

template <class Group = ExpPairingGroup>
class BgnT {
public:
    using Elem = typename Group::Elem;

    struct Ciphertext {
        Elem e;
        Level level() const { return e.level; }
    };

    static constexpr size_t kCiphertextBytes = Group::kElemBytes;
    static constexpr uint32_t kBabySteps = 1u << 16;

    static BgnT keygen(const BgnParams& params = {}) {
        BgnT bgn;
        bgn.q1_ = random_prime(params.prime_lo, params.prime_hi);
        do {
            bgn.q2_ = random_prime(params.prime_lo, params.prime_hi);
        } while (bgn.q2_ == bgn.q1_);
        auto setup = Group::setup(bgn.q1_, bgn.q2_);
        bgn.group_ = setup.group;
        bgn.g_[0] = setup.g;
        bgn.h_[0] = setup.h;
        bgn.g_[1] = bgn.group_.pair(setup.g, setup.g);
        bgn.h_[1] = bgn.group_.pair(setup.g, setup.h);
        bgn.msg_bound_ = params.msg_bound;
        bgn.has_secret_ = true;
        bgn.tables_[0] = std::make_shared<DlogTable>(bgn.group_, bgn.group_.pow(bgn.g_[0], bgn.q1_));
        bgn.tables_[1] = std::make_shared<DlogTable>(bgn.group_, bgn.group_.pow(bgn.g_[1], bgn.q1_));
        return bgn;
    }

    // Everything except decryption capability; what a processing node holds.
    BgnT public_view() const {
        BgnT pub = *this;
        pub.has_secret_ = false;
        pub.q1_ = 0;
        pub.q2_ = 0;
        pub.tables_[0].reset();
        pub.tables_[1].reset();
        return pub;
    }

    const Group& group() const { return group_; }
    uint64_t msg_bound() const { return msg_bound_; }
    bool has_secret() const { return has_secret_; }
    uint64_t q1() const { return require_secret(), q1_; }
    uint64_t q2() const { return require_secret(), q2_; }

    void set_counters(OpCounters* c) { counters_ = c; }

    Ciphertext encrypt(uint64_t m) const { return encrypt_at(m, Level::source); }
    Ciphertext encrypt_target(uint64_t m) const { return encrypt_at(m, Level::target); }

    Ciphertext encrypt_at(uint64_t m, Level level) const {
        if (m >= msg_bound_) throw Error("plaintext exceeds message bound");
        int li = level_index(level);
        Elem c = group_.op(group_.pow(g_[li], m), group_.pow(h_[li], group_.random_exponent()));
        if (counters_) counters_->encryptions++;
        return {c};
    }

    Ciphertext add(const Ciphertext& a, const Ciphertext& b) const { return {group_.op(a.e, b.e)}; }
    Ciphertext neg(const Ciphertext& a) const { return {group_.inv(a.e)}; }
    Ciphertext sub(const Ciphertext& a, const Ciphertext& b) const {
        return {group_.op(a.e, group_.inv(b.e))};
    }

    // Multiply the plaintext by a public scalar.
    Ciphertext scale(const Ciphertext& a, uint64_t k) const { return {group_.pow(a.e, k)}; }

    // The one ciphertext-ciphertext multiplication. Both inputs must still be
    // at source level; the product lives at target level.
    Ciphertext multiply(const Ciphertext& a, const Ciphertext& b) const {
        Elem e = group_.pair(a.e, b.e);
        if (counters_) counters_->pairings++;
        return {e};
    }

    // Move a source ciphertext to target level (pair with the generator), so
    // it can be combined with multiplication results.
    Ciphertext lift(const Ciphertext& a) const {
        Elem e = group_.pair(a.e, g_[0]);
        if (counters_) counters_->pairings++;
        return {e};
    }

    uint64_t decrypt(const Ciphertext& c, uint64_t bound) const {
        require_secret();
        if (counters_) counters_->decryptions++, counters_->dlogs++;
        Elem x = group_.pow(c.e, q1_);
        auto& tab = *tables_[level_index(c.e.level)];
        auto m = tab.solve(group_, x, bound);
        if (!m) throw DlogNotFound("plaintext outside decryption bound");
        return *m;
    }

    uint64_t decrypt(const Ciphertext& c) const { return decrypt(c, msg_bound_); }

    // Two-sided recovery over (-bound, bound). Scans the positive and
    // negative branches in lockstep so small magnitudes of either sign
    // return quickly.
    int64_t decrypt_signed(const Ciphertext& c, uint64_t bound) const {
        require_secret();
        if (counters_) counters_->decryptions++, counters_->dlogs++;
        auto& tab = *tables_[level_index(c.e.level)];
        Elem x = group_.pow(c.e, q1_);
        auto m = tab.solve_signed(group_, x, bound);
        if (!m) throw DlogNotFound("plaintext outside signed decryption bound");
        return *m;
    }

    int64_t decrypt_signed(const Ciphertext& c) const { return decrypt_signed(c, msg_bound_); }

    // True iff c encrypts v. A subgroup membership check, no dlog involved;
    // this is how match bits are read without paying for a search.
    bool is_value(const Ciphertext& c, uint64_t v) const {
        require_secret();
        if (counters_) counters_->tests++;
        Elem lhs = group_.pow(c.e, q1_);
        Elem base = tables_[level_index(c.e.level)]->base();
        return lhs == group_.pow(base, v);
    }

    Bytes serialize(const Ciphertext& c) const {
        Bytes out;
        out.reserve(kCiphertextBytes);
        group_.serialize(c.e, out);
        return out;
    }

    // Key material payload: order, generators, message bound, then the
    // private primes when present. The file envelope lives in keyfile.hpp.
    Bytes key_bytes() const {
        Bytes out;
        put_u64(out, uint64_t(group_.order() >> 64));
        put_u64(out, uint64_t(group_.order()));
        group_.serialize(g_[0], out);
        group_.serialize(h_[0], out);
        put_u64(out, msg_bound_);
        out.push_back(has_secret_ ? 1 : 0);
        if (has_secret_) {
            put_u64(out, q1_);
            put_u64(out, q2_);
        }
        return out;
    }

    static BgnT from_key_bytes(const uint8_t* p, size_t len) {
        if (len < 16 + 2 * Group::kElemBytes + 9) throw WireError("key payload too short");
        BgnT bgn;
        u128 order = (u128(get_u64(p)) << 64) | get_u64(p + 8);
        bgn.group_ = Group(order);
        p += 16;
        bgn.g_[0] = bgn.group_.parse(p, Level::source);
        p += Group::kElemBytes;
        bgn.h_[0] = bgn.group_.parse(p, Level::source);
        p += Group::kElemBytes;
        bgn.g_[1] = bgn.group_.pair(bgn.g_[0], bgn.g_[0]);
        bgn.h_[1] = bgn.group_.pair(bgn.g_[0], bgn.h_[0]);
        bgn.msg_bound_ = get_u64(p);
        p += 8;
        bgn.has_secret_ = (*p++ != 0);
        if (bgn.has_secret_) {
            if (len < 16 + 2 * Group::kElemBytes + 9 + 16) throw WireError("key payload too short");
            bgn.q1_ = get_u64(p);
            bgn.q2_ = get_u64(p + 8);
            if (u128(bgn.q1_) * bgn.q2_ != order) throw WireError("key factors do not match order");
            bgn.tables_[0] = std::make_shared<DlogTable>(bgn.group_, bgn.group_.pow(bgn.g_[0], bgn.q1_));
            bgn.tables_[1] = std::make_shared<DlogTable>(bgn.group_, bgn.group_.pow(bgn.g_[1], bgn.q1_));
        }
        return bgn;
    }

    Ciphertext parse(const uint8_t* p, size_t len, Level level) const {
        if (len < kCiphertextBytes) throw WireError("ciphertext buffer too short");
        return {group_.parse(p, level)};
    }

private:
    // Baby-step table of 2^16 entries plus giant stepping, generic over the
    // group element type via the backend's fingerprint. Built once per key,
    // read-only afterwards.
    class DlogTable {
    public:
        DlogTable(const Group& g, Elem base) : base_(base) {
            slots_.assign(kSlotCount, Slot{});
            Elem cur = g.identity(base.level);
            for (uint32_t j = 0; j < kBabySteps; ++j) {
                insert(cur, j);
                cur = g.op(cur, base_);
            }
            giant_inv_ = g.inv(g.pow(base_, kBabySteps));
        }

        Elem base() const { return base_; }

        std::optional<uint64_t> solve(const Group& g, Elem x, uint64_t bound) const {
            Elem cur = x;
            for (uint64_t k = 0; k * kBabySteps < bound; ++k) {
                if (auto j = find(cur)) {
                    uint64_t m = k * kBabySteps + *j;
                    if (m < bound) return m;
                    return std::nullopt;
                }
                cur = g.op(cur, giant_inv_);
            }
            return std::nullopt;
        }

        std::optional<int64_t> solve_signed(const Group& g, Elem x, uint64_t bound) const {
            Elem pos = x;
            Elem neg = g.inv(x);
            for (uint64_t k = 0; k * kBabySteps < bound; ++k) {
                if (auto j = find(pos)) {
                    uint64_t m = k * kBabySteps + *j;
                    if (m < bound) return int64_t(m);
                    return std::nullopt;
                }
                if (auto j = find(neg)) {
                    uint64_t m = k * kBabySteps + *j;
                    if (m < bound) return -int64_t(m);
                    return std::nullopt;
                }
                pos = g.op(pos, giant_inv_);
                neg = g.op(neg, giant_inv_);
            }
            return std::nullopt;
        }

    private:
        static constexpr uint32_t kSlotCount = 1u << 17;  // 50% load factor
        struct Slot {
            Elem e;
            uint32_t j = UINT32_MAX;
        };

        void insert(const Elem& e, uint32_t j) {
            uint32_t idx = uint32_t(Group::fingerprint(e)) & (kSlotCount - 1);
            while (slots_[idx].j != UINT32_MAX) idx = (idx + 1) & (kSlotCount - 1);
            slots_[idx] = {e, j};
        }

        std::optional<uint32_t> find(const Elem& e) const {
            uint32_t idx = uint32_t(Group::fingerprint(e)) & (kSlotCount - 1);
            while (slots_[idx].j != UINT32_MAX) {
                if (slots_[idx].e == e) return slots_[idx].j;
                idx = (idx + 1) & (kSlotCount - 1);
            }
            return std::nullopt;
        }

        Elem base_;
        Elem giant_inv_;
        std::vector<Slot> slots_;
    };

    static int level_index(Level l) { return l == Level::source ? 0 : 1; }

    void require_secret() const {
        if (!has_secret_) throw Error("operation requires the secret key");
    }

    Group group_;
    Elem g_[2];  // generators at source/target level
    Elem h_[2];
    uint64_t q1_ = 0;
    uint64_t q2_ = 0;
    uint64_t msg_bound_ = 0;
    bool has_secret_ = false;
    std::shared_ptr<DlogTable> tables_[2];
    OpCounters* counters_ = nullptr;
};

using Bgn = BgnT<>;

}  // namespace pnfv::crypto
