#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pnfv/crypto/bgn.hpp"
#include "pnfv/netfn/packet.hpp"
#include "pnfv/netfn/policy.hpp"
#include "pnfv/schemes/common.hpp"

namespace pnfv::schemes {

// Match-action processing on the additively homomorphic backend with one
// multiplication. The policy owner publishes per-policy ciphertext bundles;
// the processor (which sees plaintext packets in this trust model) encrypts
// the packet and evaluates match and action homomorphically, producing for
// every policy the triple (E(x), E(a(x)), E(c)). Only the key holder can
// read c or either packet branch.
//
// Equality bundle:  E(1), E(e_i) x n, E(y), E(e_j) x n, E(z*e_j) x n.
// Range bundle:     E(ab), E((a+b)e_i) x n, E(e_i) x n  (match part)
//                   plus E(e_j) x n, E(z*e_j) x n       (action part).
//
// Equality leaves c = 1 - x_i + y, so c == 1 exactly on a match; the match
// test is a plaintext-equality check on the ciphertext, no dlog needed.
// Range leaves c = (b - x_i)(x_i - a), non-negative exactly on a match,
// recovered with a signed small-range dlog.
class BgnScheme {
public:
    using Backend = crypto::Bgn;
    using Ct = Backend::Ciphertext;

    static constexpr uint8_t kEquality = 1;
    static constexpr uint8_t kRange = 2;
    // Range fields must square inside the message space: width <= 16 keeps
    // x^2 under 2^32 and the signed c inside the two-sided dlog window.
    static constexpr uint32_t kMaxRangeFieldBits = 16;

    struct Bundle {
        uint8_t kind = kEquality;
        Ct one;                   // equality: E(1)
        Ct match_value;           // equality: E(y)
        Ct lo_hi_product;         // range: E(a*b)
        std::vector<Ct> sum_sel;  // range: E((a+b) * e_i)
        std::vector<Ct> sel;      // E(e_i)
        std::vector<Ct> act;      // E(e_j)
        std::vector<Ct> act_value;// E(z * e_j)
    };

    struct Transformed {
        std::vector<Bundle> bundles;
        uint16_t n_fields = 0;
    };

    struct EncryptedPacket {
        std::vector<Ct> x;        // E(x_l) per field
        std::vector<Ct> x_sq;     // E(x_l^2) per narrow field (zeros elsewhere)
        bool has_squares = false;
    };

    // One result triple per policy, everything at the multiplied level.
    struct PolicyResult {
        uint8_t kind = kEquality;
        std::vector<Ct> x;
        std::vector<Ct> action;
        Ct c;
    };
    using Processed = std::vector<PolicyResult>;

    struct DecryptResult {
        netfn::Packet packet;
        std::optional<size_t> applied;   // policy whose action branch was taken
        std::vector<size_t> matches;     // every policy that matched
    };

    explicit BgnScheme(Backend backend) : bgn_(std::move(backend)) {}

    const Backend& backend() const { return bgn_; }
    Backend& backend() { return bgn_; }

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
                b.one = bgn_.encrypt(1);
                b.sel = basis(eq->field, n, 1);
                b.match_value = bgn_.encrypt(eq->value);
            } else {
                const auto& rg = std::get<netfn::RangeMatch>(pol.match);
                if (layout.field(rg.field).bit_width > kMaxRangeFieldBits)
                    throw Unsupported("range matching requires a field of width 16 or less");
                b.kind = kRange;
                b.lo_hi_product = bgn_.encrypt(uint64_t(rg.lo) * rg.hi);
                b.sum_sel = basis(rg.field, n, uint64_t(rg.lo) + rg.hi);
                b.sel = basis(rg.field, n, 1);
            }
            b.act = basis(replace->field, n, 1);
            b.act_value = basis(replace->field, n, replace->value);
            tf.bundles.push_back(std::move(b));
        }
        return tf;
    }

    static size_t bundle_ciphertexts(const Bundle& b) {
        size_t c = b.sel.size() + b.act.size() + b.act_value.size();
        if (b.kind == kEquality) return c + 2;  // E(1), E(y)
        return c + 1 + b.sum_sel.size();        // E(ab), E((a+b)e_i)
    }

    static size_t transform_ciphertexts(const Transformed& tf) {
        size_t total = 0;
        for (const auto& b : tf.bundles) total += bundle_ciphertexts(b);
        return total;
    }

    // Packet encryption on the processing side; done once per packet and
    // shared by all policy evaluations. Squares are computed in the clear
    // and encrypted only when some policy needs them; fields too wide to
    // square inside the message space get zero placeholders, which the
    // selector vectors annihilate.
    EncryptedPacket encrypt_packet(const netfn::Packet& x, const netfn::PacketLayout& layout,
                                   bool with_squares) const {
        validate(x, layout);
        EncryptedPacket out;
        out.x.reserve(x.values.size());
        for (uint32_t v : x.values) out.x.push_back(bgn_.encrypt(v));
        if (with_squares) {
            out.has_squares = true;
            out.x_sq.reserve(x.values.size());
            for (size_t l = 0; l < x.values.size(); ++l) {
                uint64_t v = x.values[l];
                bool narrow = layout.field(uint16_t(l + 1)).bit_width <= kMaxRangeFieldBits;
                out.x_sq.push_back(bgn_.encrypt(narrow ? v * v : 0));
            }
        }
        return out;
    }

    static bool needs_squares(const Transformed& tf) {
        for (const auto& b : tf.bundles)
            if (b.kind == kRange) return true;
        return false;
    }

    Processed process(const Transformed& tf, const EncryptedPacket& ex) const {
        if (ex.x.size() != tf.n_fields) throw Error("encrypted packet width mismatch");
        // E(x) at the multiplied level, shared across the per-policy triples.
        std::vector<Ct> lifted;
        lifted.reserve(ex.x.size());
        for (const auto& c : ex.x) lifted.push_back(bgn_.lift(c));

        Processed out;
        out.reserve(tf.bundles.size());
        for (const auto& b : tf.bundles) {
            PolicyResult r;
            r.kind = b.kind;
            r.x = lifted;
            r.c = match_ciphertext(b, ex);
            // a(x)_l = x_l - x_l*e_j[l] + z*e_j[l]
            r.action.reserve(ex.x.size());
            for (size_t l = 0; l < ex.x.size(); ++l) {
                Ct al = bgn_.sub(lifted[l], bgn_.multiply(ex.x[l], b.act[l]));
                r.action.push_back(bgn_.add(al, bgn_.lift(b.act_value[l])));
            }
            out.push_back(std::move(r));
        }
        return out;
    }

    bool matched(const PolicyResult& r) const {
        if (r.kind == kEquality) return bgn_.is_value(r.c, 1);
        return bgn_.decrypt_signed(r.c) >= 0;
    }

    // First-match-wins: the action branch of the earliest matching policy is
    // decrypted; with no match anywhere the untouched packet is recovered.
    // Every matching policy is reported so callers can log the overlap.
    DecryptResult decrypt_result(const Processed& pr, const netfn::PacketLayout& layout) const {
        if (pr.empty()) throw Error("no policy results to decrypt");
        DecryptResult res;
        for (size_t p = 0; p < pr.size(); ++p)
            if (matched(pr[p])) res.matches.push_back(p);
        const std::vector<Ct>* source = &pr.front().x;
        if (!res.matches.empty()) {
            res.applied = res.matches.front();
            source = &pr[*res.applied].action;
        }
        res.packet.values.reserve(source->size());
        for (const auto& c : *source) res.packet.values.push_back(uint32_t(bgn_.decrypt(c)));
        validate(res.packet, layout);
        return res;
    }

    Bytes serialize(const Transformed& tf) const {
        Bytes out;
        out.push_back(uint8_t(SchemeId::bgn));
        put_u16(out, uint16_t(tf.bundles.size()));
        put_u16(out, tf.n_fields);
        for (const auto& b : tf.bundles) {
            Bytes body;
            body.push_back(b.kind);
            if (b.kind == kEquality) {
                append(body, bgn_.serialize(b.one));
                append(body, bgn_.serialize(b.match_value));
            } else {
                append(body, bgn_.serialize(b.lo_hi_product));
                for (const auto& c : b.sum_sel) append(body, bgn_.serialize(c));
            }
            for (const auto& c : b.sel) append(body, bgn_.serialize(c));
            for (const auto& c : b.act) append(body, bgn_.serialize(c));
            for (const auto& c : b.act_value) append(body, bgn_.serialize(c));
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
        if (wire[off] != uint8_t(SchemeId::bgn)) throw WireError("wrong scheme identifier");
        off += 1;
        uint16_t count = get_u16(wire.data() + off);
        off += 2;
        Transformed tf;
        tf.n_fields = get_u16(wire.data() + off);
        off += 2;
        if (tf.n_fields == 0) throw WireError("transformed function has no fields");
        auto take = [&]() {
            need(Backend::kCiphertextBytes);
            Ct c = bgn_.parse(wire.data() + off, Backend::kCiphertextBytes, crypto::Level::source);
            off += Backend::kCiphertextBytes;
            return c;
        };
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
            if (b.kind == kEquality) {
                b.one = take();
                b.match_value = take();
            } else {
                b.lo_hi_product = take();
                for (uint16_t l = 0; l < tf.n_fields; ++l) b.sum_sel.push_back(take());
            }
            for (uint16_t l = 0; l < tf.n_fields; ++l) b.sel.push_back(take());
            for (uint16_t l = 0; l < tf.n_fields; ++l) b.act.push_back(take());
            for (uint16_t l = 0; l < tf.n_fields; ++l) b.act_value.push_back(take());
            if (off != end) throw WireError("bundle length mismatch");
            tf.bundles.push_back(std::move(b));
        }
        if (off != wire.size()) throw WireError("trailing bytes after transformed function");
        return tf;
    }

    // --- Compact payload branches -----------------------------------------
    // The wire path carries, per policy, just two packed branch ciphertexts
    // plus E(c). Both branches are derived homomorphically from the bundle:
    //   E(x_j)   = prod_l E(e_j[l])^(x_l)      (selector picks the field)
    //   E(j)     = prod_l E(e_j[l])^l
    //   E(z)     = prod_l E(z*e_j[l])
    // and value||index packing is ct^(2^16) * E(j). Needs the plaintext
    // packet, which the processor holds in this trust model.

    struct PayloadBranches {
        Ct no_match;  // E(x_j || j), source level
        Ct match;     // E(z || j),   source level
        Ct c;         // target level
    };

    PayloadBranches payload_branches(const Bundle& b, const netfn::Packet& x,
                                     const EncryptedPacket& ex) const {
        Ct ej_val = bgn_.scale(b.act[0], x.values[0]);
        Ct ej_idx = bgn_.scale(b.act[0], 1);
        Ct ez = b.act_value[0];
        for (size_t l = 1; l < b.act.size(); ++l) {
            ej_val = bgn_.add(ej_val, bgn_.scale(b.act[l], x.values[l]));
            ej_idx = bgn_.add(ej_idx, bgn_.scale(b.act[l], uint64_t(l + 1)));
            ez = bgn_.add(ez, b.act_value[l]);
        }
        PayloadBranches out;
        out.no_match = bgn_.add(bgn_.scale(ej_val, 1u << 16), ej_idx);
        out.match = bgn_.add(bgn_.scale(ez, 1u << 16), ej_idx);
        out.c = match_ciphertext(b, ex);
        return out;
    }

    // E(c) alone, shared by the full and compact paths.
    // Equality: c = 1 - <x, e_i> + y.
    // Range:    c = -<x^2, e_i> + <x, (a+b)e_i> - ab = (b - x_i)(x_i - a).
    Ct match_ciphertext(const Bundle& b, const EncryptedPacket& ex) const {
        if (b.kind == kEquality) {
            Ct acc = bgn_.lift(b.one);
            for (size_t l = 0; l < ex.x.size(); ++l)
                acc = bgn_.sub(acc, bgn_.multiply(ex.x[l], b.sel[l]));
            return bgn_.add(acc, bgn_.lift(b.match_value));
        }
        if (!ex.has_squares) throw Error("range policy needs squared-field ciphertexts");
        Ct acc = bgn_.neg(bgn_.multiply(ex.x_sq[0], b.sel[0]));
        for (size_t l = 1; l < ex.x.size(); ++l)
            acc = bgn_.sub(acc, bgn_.multiply(ex.x_sq[l], b.sel[l]));
        for (size_t l = 0; l < ex.x.size(); ++l)
            acc = bgn_.add(acc, bgn_.multiply(ex.x[l], b.sum_sel[l]));
        return bgn_.sub(acc, bgn_.lift(b.lo_hi_product));
    }

private:
    std::vector<Ct> basis(uint16_t field, uint16_t n, uint64_t value) const {
        std::vector<Ct> e;
        e.reserve(n);
        for (uint16_t l = 1; l <= n; ++l) e.push_back(bgn_.encrypt(l == field ? value : 0));
        return e;
    }

    static void append(Bytes& out, const Bytes& more) { out.insert(out.end(), more.begin(), more.end()); }

    Backend bgn_;
};

}  // namespace pnfv::schemes
