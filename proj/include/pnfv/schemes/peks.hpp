#pragma once

#include <cstdint>
#include <vector>

#include "pnfv/crypto/peks.hpp"
#include "pnfv/crypto/pke.hpp"
#include "pnfv/crypto/prp.hpp"
#include "pnfv/netfn/packet.hpp"
#include "pnfv/netfn/policy.hpp"
#include "pnfv/schemes/common.hpp"

namespace pnfv::schemes {

// Match-action processing on searchable encryption, for the trust model
// where the processor never sees plaintext packets. A pre-processing node
// encrypts each field bound to its position, shuffles everything under one
// fresh permutation, and discards the original. The processor locates the
// matched field with a trapdoor test and swaps in the pre-encrypted action
// ciphertext; it always forwards exactly n ciphertexts, so matching and
// non-matching packets are indistinguishable by shape.
//
// Per policy the published material is two trapdoors and one encryption:
// T(y||i) finds the match, T(j) finds the action slot, E(z||j) replaces it.
// Equality policies only; matches are evaluated against the original packet
// (substitutions never feed later match tests).
class PeksScheme {
public:
    using Search = crypto::Peks;
    using Box = crypto::Pke;

    struct Bundle {
        Search::Trapdoor match_td;  // T(y || i)
        Search::Trapdoor act_td;    // T(j)
        Box::Ciphertext act_ct;     // E(z || j)
    };

    struct Transformed {
        std::vector<Bundle> bundles;
        uint16_t n_fields = 0;
    };

    // The three same-permutation vectors the pre-processor emits.
    struct EntryOutput {
        std::vector<Box::Ciphertext> packet;      // sigma(E(x || I))
        std::vector<Search::Ciphertext> search_vi;// sigma(SE(x || I))
        std::vector<Search::Ciphertext> search_i; // sigma(SE(I))
    };

    PeksScheme(Search search, Box box) : search_(std::move(search)), box_(std::move(box)) {}

    const Search& search() const { return search_; }
    Search& search() { return search_; }
    const Box& box() const { return box_; }
    Box& box() { return box_; }

    Transformed transform(const netfn::NetworkFunction& nf, const netfn::PacketLayout& layout) const {
        netfn::validate(nf, layout);
        Transformed tf;
        tf.n_fields = uint16_t(layout.size());
        tf.bundles.reserve(nf.policies.size());
        for (const auto& pol : nf.policies) {
            const auto* eq = std::get_if<netfn::EqualityMatch>(&pol.match);
            if (!eq) throw Unsupported("search-based processing supports equality matching only");
            const auto* replace = std::get_if<netfn::ReplaceAction>(&pol.action);
            if (!replace) throw Unsupported("encrypted processing supports replace actions only");
            Bundle b;
            b.match_td = search_.trapdoor(kw_value_index(eq->value, eq->field));
            b.act_td = search_.trapdoor(kw_index(replace->field));
            b.act_ct = box_.encrypt(kw_value_index(replace->value, replace->field));
            tf.bundles.push_back(std::move(b));
        }
        return tf;
    }

    // One fresh permutation per packet, applied identically to all three
    // vectors; afterwards the caller must treat the plaintext as deleted.
    EntryOutput entry_process(const netfn::Packet& x, const crypto::PrpKey& key, uint64_t nonce) const {
        const uint16_t n = uint16_t(x.values.size());
        if (n == 0) throw Error("empty packet");
        EntryOutput out;
        out.packet.reserve(n);
        out.search_vi.reserve(n);
        out.search_i.reserve(n);
        for (uint16_t l = 1; l <= n; ++l) {
            uint32_t v = x.values[l - 1];
            out.packet.push_back(box_.encrypt(kw_value_index(v, l)));
            out.search_vi.push_back(search_.encrypt(kw_value_index(v, l)));
            out.search_i.push_back(search_.encrypt(kw_index(l)));
        }
        crypto::Permutation sigma(key, nonce, n);
        out.packet = sigma.apply(out.packet);
        out.search_vi = sigma.apply(out.search_vi);
        out.search_i = sigma.apply(out.search_i);
        return out;
    }

    // Policies run in list order; a later policy replacing the same slot
    // wins. Match scans test against the original packet's ciphertexts.
    std::vector<Box::Ciphertext> cloud_process(const Transformed& tf, const EntryOutput& in) const {
        const size_t n = in.packet.size();
        if (in.search_vi.size() != n || in.search_i.size() != n)
            throw Error("entry vectors disagree in length");
        std::vector<Box::Ciphertext> out = in.packet;
        for (const auto& b : tf.bundles) {
            bool hit = false;
            for (size_t l = 0; l < n && !hit; ++l)
                hit = search_.test(in.search_vi[l], b.match_td);
            if (!hit) continue;
            size_t slot = n;
            for (size_t l = 0; l < n; ++l) {
                if (search_.test(in.search_i[l], b.act_td)) {
                    slot = l;
                    break;
                }
            }
            if (slot == n) throw Error("match found but no action slot; transformed function corrupt");
            out[slot] = b.act_ct;
        }
        return out;
    }

    // Decrypt all n, then reassemble by the embedded positions.
    netfn::Packet client_decrypt(const std::vector<Box::Ciphertext>& cts,
                                 const netfn::PacketLayout& layout) const {
        if (cts.size() != layout.size()) throw CorruptedPacket("ciphertext count differs from layout");
        netfn::Packet x = netfn::Packet::zero(layout);
        std::vector<bool> seen(layout.size(), false);
        for (const auto& ct : cts) {
            ValueIndex vi = decode_value_index(box_.decrypt(ct));
            if (vi.index < 1 || vi.index > layout.size() || seen[vi.index - 1])
                throw CorruptedPacket("duplicate or out-of-range field position");
            seen[vi.index - 1] = true;
            x.set(vi.index, vi.value);
        }
        validate(x, layout);
        return x;
    }

    Bytes serialize(const Transformed& tf) const {
        Bytes out;
        out.push_back(uint8_t(SchemeId::peks));
        put_u16(out, uint16_t(tf.bundles.size()));
        put_u16(out, tf.n_fields);
        for (const auto& b : tf.bundles) {
            Bytes body;
            append(body, search_.serialize(b.match_td));
            append(body, search_.serialize(b.act_td));
            append(body, box_.serialize(b.act_ct));
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
        if (wire[off] != uint8_t(SchemeId::peks)) throw WireError("wrong scheme identifier");
        off += 1;
        uint16_t count = get_u16(wire.data() + off);
        off += 2;
        Transformed tf;
        tf.n_fields = get_u16(wire.data() + off);
        off += 2;
        for (uint16_t p = 0; p < count; ++p) {
            need(4);
            uint32_t blen = get_u32(wire.data() + off);
            off += 4;
            need(blen);
            size_t end = off + blen;
            Bundle b;
            b.match_td = search_.parse_trapdoor(wire.data() + off, end - off);
            off += Search::kTrapdoorBytes;
            b.act_td = search_.parse_trapdoor(wire.data() + off, end - off);
            off += Search::kTrapdoorBytes;
            size_t ct_len = 0;
            b.act_ct = box_.parse(wire.data() + off, end - off, &ct_len);
            off += ct_len;
            if (off != end) throw WireError("bundle length mismatch");
            tf.bundles.push_back(std::move(b));
        }
        if (off != wire.size()) throw WireError("trailing bytes after transformed function");
        return tf;
    }

private:
    static void append(Bytes& out, const Bytes& more) { out.insert(out.end(), more.begin(), more.end()); }

    Search search_;
    Box box_;
};

}  // namespace pnfv::schemes
