#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pnfv/crypto/counters.hpp"
#include "pnfv/netfn/policy.hpp"
#include "pnfv/schemes/bgn.hpp"
#include "pnfv/schemes/fhe.hpp"
#include "pnfv/schemes/peks.hpp"
#include "pnfv/schemes/state_table.hpp"
#include "pnfv/sim/encap.hpp"
#include "pnfv/sim/fabric.hpp"
#include "pnfv/sim/frame.hpp"

namespace pnfv::sim {

enum class SchemeChoice : uint8_t { fhe, bgn, peks };

inline const char* to_string(SchemeChoice s) {
    switch (s) {
        case SchemeChoice::fhe: return "fhe";
        case SchemeChoice::bgn: return "bgn";
        case SchemeChoice::peks: return "peks";
    }
    return "?";
}

inline SchemeChoice scheme_choice_from_string(const std::string& s) {
    if (s == "fhe") return SchemeChoice::fhe;
    if (s == "bgn") return SchemeChoice::bgn;
    if (s == "peks") return SchemeChoice::peks;
    throw ParseError("unknown scheme: " + s);
}

struct SimConfig {
    SchemeChoice scheme = SchemeChoice::bgn;
    bool state_enabled = false;
    netfn::NetworkFunction nf;
    uint32_t entry_ip = 0x0a000001;
    uint32_t cloud_ip = 0x0a000002;
    uint32_t client_ip = 0x0a000003;
};

struct TraceRow {
    uint64_t time = 0;
    Role role = Role::source;
    std::string event;
    std::string detail;
};

class Trace {
public:
    void log(Role role, std::string event, std::string detail = {}) {
        rows_.push_back({clock_++, role, std::move(event), std::move(detail)});
    }
    const std::vector<TraceRow>& rows() const { return rows_; }
    bool contains(const std::string& event) const {
        for (const auto& r : rows_)
            if (r.event == event) return true;
        return false;
    }
    void write_tsv(std::ostream& os) const {
        for (const auto& r : rows_)
            os << r.time << '\t' << to_string(r.role) << '\t' << r.event << '\t' << r.detail << '\n';
    }

private:
    std::vector<TraceRow> rows_;
    uint64_t clock_ = 0;
};

// Data-path unit ids inside one overlay packet (the unit id field carries
// the policy index for per-policy units and the table id for state units).
inline constexpr uint32_t kUnitResult = 0;       // processed packet ciphertexts
inline constexpr uint32_t kUnitEntryPacket = 1;  // sealed packet fields
inline constexpr uint32_t kUnitSearchVi = 2;     // searchable value||index
inline constexpr uint32_t kUnitSearchI = 3;      // searchable index

inline std::string counters_detail(const crypto::OpCountSnapshot& s) {
    std::ostringstream os;
    os << "enc=" << s.encryptions << " dec=" << s.decryptions << " tests=" << s.tests
       << " pair=" << s.pairings << " dlog=" << s.dlogs;
    return os.str();
}

// ---------------------------------------------------------------------------
// Entry middlebox: first hop after the protected network's edge. In the
// hidden-tuple configuration it seals the 5-tuple and blanks it from the
// forwarded frame; in the plaintext configurations it is a plain relay and
// holds no key material at all.
class EntryMb {
public:
    EntryMb(const SimConfig* cfg, Fabric* fabric, Trace* trace)
        : cfg_(cfg), fabric_(fabric), trace_(trace) {}

    // Hidden-tuple provisioning: sealing keys only, no secrets.
    void provision(crypto::Peks search_pub, crypto::Pke box_pub, crypto::PrpKey prp) {
        scheme_.emplace(std::move(search_pub), std::move(box_pub));
        scheme_->search().set_counters(&counters_);
        scheme_->box().set_counters(&counters_);
        prp_ = prp;
    }

    void on_message(const Message& m) {
        if (m.kind != MsgKind::frame) throw Error("entry middlebox only accepts frames");
        trace_->log(Role::entry, "rx_frame", "bytes=" + std::to_string(m.body.size()));
        if (cfg_->scheme != SchemeChoice::peks) {
            // Strong-adversary configurations: the processor may see the
            // tuple, so the frame travels unchanged.
            fabric_->send({Role::entry, Role::cloud, MsgKind::frame, m.body});
            trace_->log(Role::entry, "relay", "plaintext frame to processor");
            return;
        }
        if (!scheme_) throw Error("entry middlebox has no sealing keys");
        auto layout = processing_layout();
        netfn::Packet x = fields_from_frame(m.body, layout);
        x.set(kTagFieldIndex, netfn::kTagAllow);  // verdict defaults to allow
        auto sealed = scheme_->entry_process(x, prp_, nonce_++);

        Bytes blanked = m.body;
        zero_tuple(blanked);

        EncapsulatedPacket pkt;
        pkt.inner = std::move(blanked);
        pkt.units.push_back({schemes::SchemeId::peks, kUnitEntryPacket, serialize_pke(sealed.packet)});
        pkt.units.push_back({schemes::SchemeId::peks, kUnitSearchVi, serialize_search(sealed.search_vi)});
        pkt.units.push_back({schemes::SchemeId::peks, kUnitSearchI, serialize_search(sealed.search_i)});
        Bytes wire = encapsulate(pkt, cfg_->entry_ip, cfg_->cloud_ip);
        trace_->log(Role::entry, "seal", "fields=" + std::to_string(layout.size()) +
                                             " nonce=" + std::to_string(nonce_ - 1));
        fabric_->send({Role::entry, Role::cloud, MsgKind::overlay, std::move(wire)});
    }

    crypto::OpCountSnapshot counters() const { return counters_.snapshot(); }

private:
    Bytes serialize_pke(const std::vector<crypto::Pke::Ciphertext>& cts) const {
        std::vector<Bytes> raw;
        raw.reserve(cts.size());
        for (const auto& c : cts) raw.push_back(scheme_->box().serialize(c));
        return encode_ct_list(raw);
    }
    Bytes serialize_search(const std::vector<crypto::Peks::Ciphertext>& cts) const {
        std::vector<Bytes> raw;
        raw.reserve(cts.size());
        for (const auto& c : cts) raw.push_back(scheme_->search().serialize(c));
        return encode_ct_list(raw);
    }

    const SimConfig* cfg_;
    Fabric* fabric_;
    Trace* trace_;
    std::optional<schemes::PeksScheme> scheme_;
    crypto::PrpKey prp_{};
    uint64_t nonce_ = 1;
    crypto::OpCounters counters_;
};

// ---------------------------------------------------------------------------
// Cloud middlebox: holds the transformed function and, when connection
// tracking is on, the sealed state table. Never holds a decryption key.
// Static-policy crypto and state-table crypto run on separate counter
// banks so a state hit can prove it skipped the static policies entirely.
class CloudMb {
public:
    CloudMb(const SimConfig* cfg, Fabric* fabric, Trace* trace)
        : cfg_(cfg), fabric_(fabric), trace_(trace) {}

    void provision_fhe(crypto::MockFhe pub) {
        fhe_.emplace(std::move(pub));
        fhe_->backend().set_counters(&counters_static_);
    }
    void provision_bgn(crypto::Bgn pub) {
        bgn_.emplace(std::move(pub));
        bgn_->backend().set_counters(&counters_static_);
    }
    void provision_peks(crypto::Peks search_pub, crypto::Pke box_pub) {
        peks_.emplace(search_pub, box_pub);
        peks_->search().set_counters(&counters_static_);
        peks_->box().set_counters(&counters_static_);
        table_.emplace(search_pub);
        table_->set_counters(&counters_state_);
        box_state_ = box_pub;
        box_state_->set_counters(&counters_state_);
    }

    void on_message(const Message& m) {
        switch (m.kind) {
            case MsgKind::install: return handle_install(m.body);
            case MsgKind::frame: return handle_plain_frame(m.body);
            case MsgKind::overlay: return handle_overlay(m.body);
            case MsgKind::registration: return handle_registration(m.body);
            case MsgKind::state_update: return handle_state_update(m.body);
            case MsgKind::state_delete: return handle_state_delete(m.body);
        }
        throw Error("unhandled message kind at the cloud middlebox");
    }

    crypto::OpCountSnapshot static_counters() const { return counters_static_.snapshot(); }
    crypto::OpCountSnapshot state_counters() const { return counters_state_.snapshot(); }
    size_t state_hits() const { return state_hits_; }
    uint64_t static_ops_on_hits() const { return static_ops_on_hits_; }
    size_t table_size() const { return table_ ? table_->size() : 0; }

private:
    void handle_install(const Bytes& wire) {
        size_t policies = 0;
        switch (cfg_->scheme) {
            case SchemeChoice::fhe:
                fhe_tf_ = fhe_->parse(wire);
                policies = fhe_tf_->bundles.size();
                break;
            case SchemeChoice::bgn:
                bgn_tf_ = bgn_->parse(wire);
                policies = bgn_tf_->bundles.size();
                break;
            case SchemeChoice::peks:
                peks_tf_ = peks_->parse(wire);
                policies = peks_tf_->bundles.size();
                break;
        }
        trace_->log(Role::cloud, "install", "policies=" + std::to_string(policies));
    }

    // Plaintext-tuple path: the processor itself encrypts the packet.
    void handle_plain_frame(const Bytes& frame) {
        trace_->log(Role::cloud, "rx_frame", "bytes=" + std::to_string(frame.size()));
        auto layout = processing_layout();
        netfn::Packet x = fields_from_frame(frame, layout);
        x.set(kTagFieldIndex, netfn::kTagAllow);

        EncapsulatedPacket pkt;
        pkt.inner = frame;
        if (cfg_->scheme == SchemeChoice::bgn) {
            if (!bgn_tf_) throw Error("no transformed function installed");
            auto ex = bgn_->encrypt_packet(x, layout, schemes::BgnScheme::needs_squares(*bgn_tf_));
            for (size_t p = 0; p < bgn_tf_->bundles.size(); ++p) {
                auto br = bgn_->payload_branches(bgn_tf_->bundles[p], x, ex);
                Bytes body;
                body.reserve(kBgnUnitBodyBytes);
                auto append = [&](const crypto::Bgn::Ciphertext& c) {
                    Bytes one = bgn_->backend().serialize(c);
                    body.insert(body.end(), one.begin(), one.end());
                };
                append(br.no_match);
                append(br.match);
                append(br.c);
                pkt.units.push_back({schemes::SchemeId::bgn, uint32_t(p), std::move(body)});
            }
        } else {
            if (!fhe_tf_) throw Error("no transformed function installed");
            auto out = fhe_->process(*fhe_tf_, fhe_->encrypt_packet(x));
            std::vector<Bytes> raw;
            raw.reserve(out.size());
            for (const auto& c : out) raw.push_back(fhe_->backend().serialize(c));
            pkt.units.push_back({schemes::SchemeId::fhe, kUnitResult, encode_ct_list(raw)});
        }
        size_t policies = cfg_->scheme == SchemeChoice::bgn ? bgn_tf_->bundles.size()
                                                            : fhe_tf_->bundles.size();
        trace_->log(Role::cloud, "process", "policies=" + std::to_string(policies));
        fabric_->send({Role::cloud, Role::client, MsgKind::overlay,
                       encapsulate(pkt, cfg_->cloud_ip, cfg_->client_ip)});
    }

    // Hidden-tuple path: sealed packet in, sealed packet out.
    void handle_overlay(const Bytes& wire) {
        if (!peks_tf_) throw Error("no transformed function installed");
        EncapsulatedPacket in = decapsulate(wire);
        trace_->log(Role::cloud, "rx_overlay", "bytes=" + std::to_string(wire.size()));
        // Privacy invariant of this configuration: the edge must have
        // blanked the tuple before the frame reached us.
        if (!tuple_is_zero(in.inner)) throw Error("cloud middlebox received a plaintext 5-tuple");

        schemes::PeksScheme::EntryOutput sealed;
        for (const auto& u : in.units) {
            if (u.scheme != schemes::SchemeId::peks) throw WireError("unexpected unit scheme");
            if (u.id == kUnitEntryPacket) {
                for (const auto& raw : decode_ct_list(u.body))
                    sealed.packet.push_back(peks_->box().parse(raw.data(), raw.size()));
            } else if (u.id == kUnitSearchVi) {
                for (const auto& raw : decode_ct_list(u.body))
                    sealed.search_vi.push_back(peks_->search().parse_ciphertext(raw.data(), raw.size()));
            } else if (u.id == kUnitSearchI) {
                for (const auto& raw : decode_ct_list(u.body))
                    sealed.search_i.push_back(peks_->search().parse_ciphertext(raw.data(), raw.size()));
            } else {
                throw WireError("unexpected unit id from the entry middlebox");
            }
        }
        if (sealed.packet.empty() || sealed.packet.size() != sealed.search_vi.size() ||
            sealed.packet.size() != sealed.search_i.size())
            throw WireError("sealed packet vectors incomplete");

        EncapsulatedPacket out_pkt;
        out_pkt.inner = in.inner;

        std::optional<uint32_t> hit;
        if (cfg_->state_enabled) hit = table_->match(sealed.search_vi);
        if (hit) {
            auto before = counters_static_.snapshot();
            auto entry = table_->entry(*hit);
            std::vector<Bytes> raw;
            raw.reserve(sealed.packet.size() + 3);
            for (const auto& c : sealed.packet) raw.push_back(peks_->box().serialize(c));
            raw.push_back(box_state_->serialize(
                box_state_->encrypt(schemes::kw_value_index(*hit, kIdFieldIndex))));
            raw.push_back(box_state_->serialize(entry.enc_state));
            raw.push_back(box_state_->serialize(entry.enc_tag));
            ++state_hits_;
            auto delta = counters_static_.snapshot() - before;
            uint64_t static_ops = delta.encryptions + delta.decryptions + delta.tests +
                                  delta.pairings + delta.dlogs;
            static_ops_on_hits_ += static_ops;
            if (static_ops != 0) throw Error("static policies ran on a state-table hit");
            trace_->log(Role::cloud, "state_hit",
                        "id=" + std::to_string(*hit) + " static_ops=" + std::to_string(static_ops));
            out_pkt.units.push_back({schemes::SchemeId::state, *hit, encode_ct_list(raw)});
        } else {
            if (cfg_->state_enabled) trace_->log(Role::cloud, "state_miss");
            auto out = peks_->cloud_process(*peks_tf_, sealed);
            std::vector<Bytes> raw;
            raw.reserve(out.size());
            for (const auto& c : out) raw.push_back(peks_->box().serialize(c));
            trace_->log(Role::cloud, "process", "policies=" + std::to_string(peks_tf_->bundles.size()));
            out_pkt.units.push_back({schemes::SchemeId::peks, kUnitResult, encode_ct_list(raw)});
        }
        fabric_->send({Role::cloud, Role::client, MsgKind::overlay,
                       encapsulate(out_pkt, cfg_->cloud_ip, cfg_->client_ip)});
    }

    void handle_registration(const Bytes& wire) {
        auto m = schemes::parse_state_entry(peks_->search(), peks_->box(), wire);
        uint32_t id = table_->register_entry(std::move(m));
        trace_->log(Role::cloud, "state_registered", "id=" + std::to_string(id));
    }

    void handle_state_update(const Bytes& wire) {
        auto u = schemes::parse_state_update(peks_->box(), wire);
        table_->update(u.id, std::move(u.new_state));
        trace_->log(Role::cloud, "state_updated", "id=" + std::to_string(u.id));
    }

    void handle_state_delete(const Bytes& wire) {
        uint32_t id = schemes::parse_state_delete(wire);
        table_->remove(id);
        trace_->log(Role::cloud, "state_deleted", "id=" + std::to_string(id));
    }

    const SimConfig* cfg_;
    Fabric* fabric_;
    Trace* trace_;

    std::optional<schemes::FheScheme> fhe_;
    std::optional<schemes::BgnScheme> bgn_;
    std::optional<schemes::PeksScheme> peks_;
    std::optional<crypto::Pke> box_state_;  // separate counter bank for state-path sealing
    std::optional<schemes::FheScheme::Transformed> fhe_tf_;
    std::optional<schemes::BgnScheme::Transformed> bgn_tf_;
    std::optional<schemes::PeksScheme::Transformed> peks_tf_;
    std::optional<schemes::StateTable> table_;

    crypto::OpCounters counters_static_;
    crypto::OpCounters counters_state_;
    size_t state_hits_ = 0;
    uint64_t static_ops_on_hits_ = 0;
};

// ---------------------------------------------------------------------------
// Client middlebox: the key owner. Generates everything, transforms the
// network function for installation, and turns processed packets back into
// verdicts; with connection tracking on it also drives the table protocol.
class ClientMb {
public:
    struct Verdict {
        bool forward = false;
        netfn::Packet packet;
    };

    ClientMb(const SimConfig* cfg, Fabric* fabric, Trace* trace)
        : cfg_(cfg), fabric_(fabric), trace_(trace) {
        switch (cfg_->scheme) {
            case SchemeChoice::fhe:
                fhe_.emplace(crypto::MockFhe::keygen());
                fhe_->backend().set_counters(&counters_);
                break;
            case SchemeChoice::bgn:
                bgn_.emplace(crypto::Bgn::keygen());
                bgn_->backend().set_counters(&counters_);
                break;
            case SchemeChoice::peks:
                peks_.emplace(crypto::Peks::keygen(), crypto::Pke::keygen());
                peks_->search().set_counters(&counters_);
                peks_->box().set_counters(&counters_);
                prp_ = crypto::PrpKey::generate();
                break;
        }
    }

    // Public halves for the other roles; secrets never leave this object.
    crypto::MockFhe fhe_public() const { return fhe_->backend().public_view(); }
    crypto::Bgn bgn_public() const { return bgn_->backend().public_view(); }
    crypto::Peks search_public() const { return peks_->search().public_view(); }
    crypto::Pke box_public() const { return peks_->box().public_view(); }
    crypto::PrpKey prp() const { return prp_; }

    Bytes transform_wire() const {
        auto layout = processing_layout();
        switch (cfg_->scheme) {
            case SchemeChoice::fhe: return fhe_->serialize(fhe_->transform(cfg_->nf, layout));
            case SchemeChoice::bgn: {
                // The overlay carries the compact two-branch payload, whose
                // value||index packing caps opened values at 16 bits; wider
                // action fields would overflow the discrete-log window.
                for (const auto& pol : cfg_->nf.policies) {
                    const auto* replace = std::get_if<netfn::ReplaceAction>(&pol.action);
                    if (replace && layout.field(replace->field).bit_width > 16)
                        throw Unsupported("overlay payload supports action fields up to 16 bits");
                }
                return bgn_->serialize(bgn_->transform(cfg_->nf, layout));
            }
            case SchemeChoice::peks: return peks_->serialize(peks_->transform(cfg_->nf, layout));
        }
        throw Error("unreachable");
    }

    void on_message(const Message& m) {
        if (m.kind != MsgKind::overlay) throw Error("client middlebox only accepts overlay packets");
        handle_overlay(m.body);
    }

    const std::vector<Verdict>& verdicts() const { return verdicts_; }
    crypto::OpCountSnapshot counters() const { return counters_.snapshot(); }

private:
    void handle_overlay(const Bytes& wire) {
        EncapsulatedPacket pkt = decapsulate(wire);
        trace_->log(Role::client, "rx_overlay", "bytes=" + std::to_string(wire.size()));
        auto layout = processing_layout();

        Verdict v;
        std::optional<uint32_t> table_id;
        uint32_t table_state = 0;

        switch (cfg_->scheme) {
            case SchemeChoice::bgn: v.packet = bgn_verdict(pkt, layout); break;
            case SchemeChoice::fhe: v.packet = fhe_verdict(pkt, layout); break;
            case SchemeChoice::peks: v.packet = peks_verdict(pkt, layout, table_id, table_state); break;
        }
        v.forward = v.packet.get(kTagFieldIndex) != netfn::kTagDrop;
        trace_->log(Role::client, v.forward ? "verdict_forward" : "verdict_drop",
                    "s_ip=" + std::to_string(v.packet.get(1)) + " d_ip=" + std::to_string(v.packet.get(2)));

        if (cfg_->state_enabled && cfg_->scheme == SchemeChoice::peks)
            drive_state_protocol(pkt.inner, v, table_id, table_state);

        if (v.forward) {
            Bytes out = pkt.inner;
            restore_tuple(out, v.packet);
            fabric_->send({Role::client, Role::sink, MsgKind::frame, std::move(out)});
        }
        verdicts_.push_back(std::move(v));
    }

    // Scan the per-policy units in order; the first policy whose match
    // result seals 1 decides the verdict via its deny branch. With no match
    // anywhere the allow branch of the first unit is opened instead.
    netfn::Packet bgn_verdict(const EncapsulatedPacket& pkt, const netfn::PacketLayout& layout) {
        netfn::Packet x = fields_from_frame(pkt.inner, layout);
        x.set(kTagFieldIndex, netfn::kTagAllow);
        if (pkt.units.empty()) return x;

        const auto& backend = bgn_->backend();
        std::optional<schemes::ValueIndex> opened;
        for (const auto& u : pkt.units) {
            if (u.scheme != schemes::SchemeId::bgn || u.body.size() != kBgnUnitBodyBytes)
                throw WireError("malformed policy unit");
            auto c = backend.parse(u.body.data() + 64, 32, crypto::Level::target);
            if (backend.is_value(c, 1)) {
                auto deny = backend.parse(u.body.data() + 32, 32, crypto::Level::source);
                opened = schemes::unpack_value_index(backend.decrypt(deny));
                trace_->log(Role::client, "match", "policy=" + std::to_string(u.id));
                break;
            }
        }
        if (!opened) {
            auto allow = bgn_->backend().parse(pkt.units.front().body.data(), 32, crypto::Level::source);
            opened = schemes::unpack_value_index(bgn_->backend().decrypt(allow));
        }
        if (opened->index < 1 || opened->index > layout.size())
            throw CorruptedPacket("opened branch names a field outside the layout");
        x.set(opened->index, opened->value);
        return x;
    }

    netfn::Packet fhe_verdict(const EncapsulatedPacket& pkt, const netfn::PacketLayout& layout) {
        if (pkt.units.size() != 1 || pkt.units[0].scheme != schemes::SchemeId::fhe)
            throw WireError("expected a single processed-packet unit");
        schemes::FheScheme::EncryptedPacket ex;
        for (const auto& raw : decode_ct_list(pkt.units[0].body))
            ex.push_back(fhe_->backend().parse(raw.data(), raw.size()));
        return fhe_->decrypt_packet(ex, layout);
    }

    netfn::Packet peks_verdict(const EncapsulatedPacket& pkt, const netfn::PacketLayout& layout,
                               std::optional<uint32_t>& table_id, uint32_t& table_state) {
        if (pkt.units.size() != 1) throw WireError("expected a single processed-packet unit");
        const auto& u = pkt.units[0];
        auto raw = decode_ct_list(u.body);
        std::vector<crypto::Pke::Ciphertext> cts;
        cts.reserve(raw.size());
        for (const auto& r : raw) cts.push_back(peks_->box().parse(r.data(), r.size()));

        if (u.scheme == schemes::SchemeId::peks) {
            return peks_->client_decrypt(cts, layout);
        }
        if (u.scheme != schemes::SchemeId::state) throw WireError("unexpected unit scheme");
        // Table hit: the processor appended sealed id, state and tag. They
        // are positional, after the n packet ciphertexts; the appended tag
        // overrides whatever the packet carried.
        if (cts.size() != size_t(layout.size()) + 3)
            throw CorruptedPacket("state-hit packet has the wrong ciphertext count");
        auto id_vi = schemes::decode_value_index(peks_->box().decrypt(cts[layout.size()]));
        auto s_vi = schemes::decode_value_index(peks_->box().decrypt(cts[layout.size() + 1]));
        auto t_vi = schemes::decode_value_index(peks_->box().decrypt(cts[layout.size() + 2]));
        if (id_vi.index != kIdFieldIndex || s_vi.index != kStateFieldIndex ||
            t_vi.index != kTagFieldIndex)
            throw CorruptedPacket("appended table ciphertexts are mislabeled");
        cts.resize(layout.size());
        netfn::Packet x = peks_->client_decrypt(cts, layout);
        x.set(kTagFieldIndex, t_vi.value);
        table_id = id_vi.value;
        table_state = s_vi.value;
        trace_->log(Role::client, "table_hit",
                    "id=" + std::to_string(id_vi.value) + " state=" + std::to_string(s_vi.value));
        return x;
    }

    // Connection-tracking decisions from the decrypted packet plus the TCP
    // flag bits, which survive in the blanked frame's transport bytes.
    void drive_state_protocol(const Bytes& inner, const Verdict& v,
                              const std::optional<uint32_t>& table_id, uint32_t table_state) {
        if (v.packet.get(5) != kProtoTcp) return;
        size_t transport_len = inner.size() > kTransportOffset ? inner.size() - kTransportOffset : 0;
        if (transport_len < 14) return;
        uint8_t flags = inner[kTransportOffset + 13];

        if (!table_id) {
            if ((flags & kTcpSyn) && !(flags & kTcpAck) && v.forward) {
                auto m = schemes::make_state_entry(peks_->search(), peks_->box(), v.packet,
                                                   {1, 2, 3, 4, 5}, netfn::kStateNew,
                                                   kStateFieldIndex, netfn::kTagAllow, kTagFieldIndex);
                trace_->log(Role::client, "state_create", "state=new tag=allow");
                fabric_->send({Role::client, Role::cloud, MsgKind::registration,
                               schemes::serialize_state_entry(peks_->search(), peks_->box(), m)});
            }
            return;
        }
        if ((flags & kTcpFin) && (flags & kTcpAck)) {
            trace_->log(Role::client, "state_delete", "id=" + std::to_string(*table_id));
            fabric_->send({Role::client, Role::cloud, MsgKind::state_delete,
                           schemes::encode_state_delete(*table_id)});
            return;
        }
        if ((flags & kTcpAck) && table_state == netfn::kStateNew) {
            trace_->log(Role::client, "state_update", "id=" + std::to_string(*table_id) + " state=est");
            auto est = peks_->box().encrypt(
                schemes::kw_value_index(netfn::kStateEst, kStateFieldIndex));
            fabric_->send({Role::client, Role::cloud, MsgKind::state_update,
                           schemes::encode_state_update(*table_id, peks_->box(), est)});
        }
    }

    const SimConfig* cfg_;
    Fabric* fabric_;
    Trace* trace_;
    std::optional<schemes::FheScheme> fhe_;
    std::optional<schemes::BgnScheme> bgn_;
    std::optional<schemes::PeksScheme> peks_;
    crypto::PrpKey prp_{};
    crypto::OpCounters counters_;
    std::vector<Verdict> verdicts_;
};

}  // namespace pnfv::sim
