#pragma once

#include <cstdint>
#include <vector>

#include "pnfv/crypto/mockfhe.hpp"
#include "pnfv/netfn/packet.hpp"
#include "pnfv/netfn/policy.hpp"
#include "pnfv/schemes/common.hpp"

namespace pnfv::schemes {

// Match-action processing on the homomorphic-circuit backend. The whole
// packet stays encrypted end to end: the processor computes the match bit
// inside the circuit and blends action and identity branches, so N policies
// compose sequentially on ciphertexts with no intermediate decryption.
//
// All comparison circuits run at a fixed 32-bit width regardless of the
// declared field width, so circuit shape reveals nothing about the layout.
class FheScheme {
public:
    using Backend = crypto::MockFhe;
    using Ct = Backend::Ciphertext;

    static constexpr uint8_t kEquality = 1;
    static constexpr uint8_t kRange = 2;
    static constexpr unsigned kCircuitBits = 32;

    struct Bundle {
        uint8_t kind = kEquality;
        std::vector<Ct> sel;  // selector vector for the matched field
        std::vector<Ct> act;  // selector vector for the action field
        Ct match_value;       // equality: y
        Ct range_lo, range_hi;
        Ct action_value;      // z
    };

    struct Transformed {
        std::vector<Bundle> bundles;
        uint16_t n_fields = 0;
    };

    using EncryptedPacket = std::vector<Ct>;

    explicit FheScheme(Backend backend) : fhe_(std::move(backend)) {}

    const Backend& backend() const { return fhe_; }
    Backend& backend() { return fhe_; }

    Transformed transform(const netfn::NetworkFunction& nf, const netfn::PacketLayout& layout) const {
        netfn::validate(nf, layout);
        const uint16_t n = uint16_t(layout.size());
        Transformed tf;
        tf.n_fields = n;
        tf.bundles.reserve(nf.policies.size());
        for (const auto& pol : nf.policies) {
            const auto* replace = std::get_if<netfn::ReplaceAction>(&pol.action);
            if (!replace) throw Unsupported("encrypted processing supports replace actions only");
            Bundle b;
            if (const auto* eq = std::get_if<netfn::EqualityMatch>(&pol.match)) {
                b.kind = kEquality;
                b.sel = basis(eq->field, n);
                b.match_value = fhe_.encrypt(eq->value);
            } else {
                const auto& rg = std::get<netfn::RangeMatch>(pol.match);
                b.kind = kRange;
                b.sel = basis(rg.field, n);
                b.range_lo = fhe_.encrypt(rg.lo);
                b.range_hi = fhe_.encrypt(rg.hi);
            }
            b.act = basis(replace->field, n);
            b.action_value = fhe_.encrypt(replace->value);
            tf.bundles.push_back(std::move(b));
        }
        return tf;
    }

    EncryptedPacket encrypt_packet(const netfn::Packet& x) const {
        EncryptedPacket out;
        out.reserve(x.values.size());
        for (uint32_t v : x.values) out.push_back(fhe_.encrypt(v));
        return out;
    }

    // Sequential composition: each policy consumes the previous policy's
    // output ciphertexts, re-decomposing into bits where the comparison
    // circuits need them.
    EncryptedPacket process(const Transformed& tf, const EncryptedPacket& ex) const {
        if (ex.size() != tf.n_fields) throw Error("encrypted packet width mismatch");
        EncryptedPacket state = ex;
        for (const auto& b : tf.bundles) state = apply_policy(b, state);
        return state;
    }

    netfn::Packet decrypt_packet(const EncryptedPacket& ex, const netfn::PacketLayout& layout) const {
        if (ex.size() != layout.size()) throw Error("encrypted packet width mismatch");
        netfn::Packet x;
        x.values.reserve(ex.size());
        for (size_t l = 0; l < ex.size(); ++l) {
            uint64_t raw = uint64_t(fhe_.decrypt(ex[l]));
            if (raw > layout.field(uint16_t(l + 1)).max_value())
                throw CorruptedPacket("decrypted field exceeds layout width");
            x.values.push_back(uint32_t(raw));
        }
        return x;
    }

    Bytes serialize(const Transformed& tf) const {
        Bytes out;
        out.push_back(uint8_t(SchemeId::fhe));
        put_u16(out, uint16_t(tf.bundles.size()));
        put_u16(out, tf.n_fields);
        for (const auto& b : tf.bundles) {
            Bytes body;
            body.push_back(b.kind);
            for (const auto& c : b.sel) append(body, fhe_.serialize(c));
            for (const auto& c : b.act) append(body, fhe_.serialize(c));
            if (b.kind == kEquality) {
                append(body, fhe_.serialize(b.match_value));
            } else {
                append(body, fhe_.serialize(b.range_lo));
                append(body, fhe_.serialize(b.range_hi));
            }
            append(body, fhe_.serialize(b.action_value));
            put_u32(out, uint32_t(body.size()));
            append(out, body);
        }
        return out;
    }

    Transformed parse(const Bytes& wire) const {
        size_t off = 0;
        auto need = [&](size_t k) {
            if (off + k > wire.size()) throw WireError("transformed function truncated");
        };
        need(5);
        if (wire[off] != uint8_t(SchemeId::fhe)) throw WireError("wrong scheme identifier");
        off += 1;
        uint16_t count = get_u16(wire.data() + off);
        off += 2;
        Transformed tf;
        tf.n_fields = get_u16(wire.data() + off);
        off += 2;
        if (tf.n_fields == 0) throw WireError("transformed function has no fields");
        for (uint16_t p = 0; p < count; ++p) {
            need(4);
            uint32_t blen = get_u32(wire.data() + off);
            off += 4;
            need(blen);
            size_t end = off + blen;
            Bundle b;
            b.kind = wire[off];
            off += 1;
            if (b.kind != kEquality && b.kind != kRange) throw WireError("unknown bundle kind");
            auto take = [&]() {
                need(Backend::kCiphertextBytes);
                Ct c = fhe_.parse(wire.data() + off, Backend::kCiphertextBytes);
                off += Backend::kCiphertextBytes;
                return c;
            };
            for (uint16_t l = 0; l < tf.n_fields; ++l) b.sel.push_back(take());
            for (uint16_t l = 0; l < tf.n_fields; ++l) b.act.push_back(take());
            if (b.kind == kEquality) {
                b.match_value = take();
            } else {
                b.range_lo = take();
                b.range_hi = take();
            }
            b.action_value = take();
            if (off != end) throw WireError("bundle length mismatch");
            tf.bundles.push_back(std::move(b));
        }
        if (off != wire.size()) throw WireError("trailing bytes after transformed function");
        return tf;
    }

private:
    std::vector<Ct> basis(uint16_t field, uint16_t n) const {
        std::vector<Ct> e;
        e.reserve(n);
        for (uint16_t l = 1; l <= n; ++l) e.push_back(fhe_.encrypt(l == field ? 1 : 0));
        return e;
    }

    static void append(Bytes& out, const Bytes& more) { out.insert(out.end(), more.begin(), more.end()); }

    // selected = <x, e_i>; one ciphertext holding the matched field's value.
    Ct select(const std::vector<Ct>& sel, const EncryptedPacket& x) const {
        Ct acc = fhe_.mul(x[0], sel[0]);
        for (size_t l = 1; l < x.size(); ++l) acc = fhe_.add(acc, fhe_.mul(x[l], sel[l]));
        return acc;
    }

    // Bitwise equality: product over c_k = a_k b_k + (1-a_k)(1-b_k),
    // folded as 2*a_k*b_k - a_k - b_k + 1.
    Ct bits_equal(const std::vector<Ct>& a, const std::vector<Ct>& b) const {
        Ct m = fhe_.encrypt(1);
        for (unsigned k = 0; k < a.size(); ++k) {
            Ct prod = fhe_.mul(a[k], b[k]);
            Ct ck = fhe_.add_plain(fhe_.sub(fhe_.add(prod, prod), fhe_.add(a[k], b[k])), 1);
            m = fhe_.mul(m, ck);
        }
        return m;
    }

    // Bitwise a >= b: scan from the most significant bit, accumulating
    // (all higher bits agree) * a_k * (1 - b_k), plus full agreement.
    Ct bits_geq(const std::vector<Ct>& a, const std::vector<Ct>& b) const {
        Ct acc = fhe_.encrypt(0);
        Ct agree = fhe_.encrypt(1);
        for (int k = int(a.size()) - 1; k >= 0; --k) {
            Ct gt = fhe_.mul(a[k], fhe_.sub(fhe_.encrypt(1), b[k]));
            acc = fhe_.add(acc, fhe_.mul(agree, gt));
            Ct prod = fhe_.mul(a[k], b[k]);
            Ct ck = fhe_.add_plain(fhe_.sub(fhe_.add(prod, prod), fhe_.add(a[k], b[k])), 1);
            agree = fhe_.mul(agree, ck);
        }
        return fhe_.add(acc, agree);
    }

    EncryptedPacket apply_policy(const Bundle& b, const EncryptedPacket& x) const {
        auto sel_bits = fhe_.to_bits(select(b.sel, x), kCircuitBits);
        Ct m;
        if (b.kind == kEquality) {
            m = bits_equal(sel_bits, fhe_.to_bits(b.match_value, kCircuitBits));
        } else {
            Ct ge_lo = bits_geq(sel_bits, fhe_.to_bits(b.range_lo, kCircuitBits));
            Ct le_hi = bits_geq(fhe_.to_bits(b.range_hi, kCircuitBits), sel_bits);
            m = fhe_.mul(ge_lo, le_hi);
        }
        // new_l = m * (z*e_j[l] - x_l*e_j[l]) + x_l : action where selected,
        // identity elsewhere, all under the match bit.
        EncryptedPacket out;
        out.reserve(x.size());
        for (size_t l = 0; l < x.size(); ++l) {
            Ct swap = fhe_.sub(fhe_.mul(b.action_value, b.act[l]), fhe_.mul(x[l], b.act[l]));
            out.push_back(fhe_.add(fhe_.mul(m, swap), x[l]));
        }
        return out;
    }

    Backend fhe_;
};

}  // namespace pnfv::schemes
