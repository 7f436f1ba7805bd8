#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <vector>

#include "pnfv/crypto/peks.hpp"
#include "pnfv/crypto/pke.hpp"
#include "pnfv/crypto/prp.hpp"
#include "pnfv/netfn/packet.hpp"
#include "pnfv/schemes/common.hpp"

namespace pnfv::schemes {

// Connection-tracking table for the searchable-encryption trust model. The
// key holder publishes, per tracked flow, a shuffled set of field trapdoors
// plus encrypted state and tag; the table owner can recognize packets of
// the flow (a packet hits when every trapdoor matches some shuffled field
// ciphertext) without learning which fields are tracked or their values.
// Hits short-circuit all static policy processing.

struct StateEntryMaterial {
    std::vector<crypto::Peks::Trapdoor> trapdoors;  // shuffled T(x_l || l)
    crypto::Pke::Ciphertext enc_state;              // E(s || state slot)
    crypto::Pke::Ciphertext enc_tag;                // E(t || tag slot)
};

// Client-side entry creation: trapdoors for the chosen field subset,
// shuffled under a throwaway permutation; state and tag sealed for self.
inline StateEntryMaterial make_state_entry(const crypto::Peks& search, const crypto::Pke& box,
                                           const netfn::Packet& x,
                                           const std::vector<uint16_t>& subset,
                                           uint32_t state, uint16_t state_index,
                                           uint32_t tag, uint16_t tag_index) {
    if (subset.empty()) throw Error("state entry needs at least one tracked field");
    StateEntryMaterial m;
    m.trapdoors.reserve(subset.size());
    for (uint16_t l : subset) {
        if (l < 1 || l > x.values.size()) throw Error("tracked field outside packet");
        m.trapdoors.push_back(search.trapdoor(kw_value_index(x.values[l - 1], l)));
    }
    crypto::Permutation sigma(crypto::PrpKey::generate(), 0, uint32_t(m.trapdoors.size()));
    m.trapdoors = sigma.apply(m.trapdoors);
    m.enc_state = box.encrypt(kw_value_index(state, state_index));
    m.enc_tag = box.encrypt(kw_value_index(tag, tag_index));
    return m;
}

// Table held by the processing side. Lookups may run concurrently;
// registration, update and deletion serialize behind a writer lock.
class StateTable {
public:
    struct Entry {
        std::vector<crypto::Peks::Trapdoor> trapdoors;
        crypto::Pke::Ciphertext enc_state;
        crypto::Pke::Ciphertext enc_tag;
    };

    explicit StateTable(crypto::Peks search) : search_(std::move(search)) {}

    uint32_t register_entry(StateEntryMaterial m) {
        std::unique_lock lock(mu_);
        uint32_t id = next_id_++;
        entries_.emplace(id, Entry{std::move(m.trapdoors), std::move(m.enc_state), std::move(m.enc_tag)});
        return id;
    }

    // A packet hits an entry when every trapdoor matches some position of
    // the shuffled field ciphertexts. Entries are tried in creation order.
    std::optional<uint32_t> match(const std::vector<crypto::Peks::Ciphertext>& search_vi) const {
        std::shared_lock lock(mu_);
        for (const auto& [id, e] : entries_) {
            bool all = true;
            for (const auto& td : e.trapdoors) {
                bool found = false;
                for (const auto& ct : search_vi)
                    if (search_.test(ct, td)) {
                        found = true;
                        break;
                    }
                if (!found) {
                    all = false;
                    break;
                }
            }
            if (all) return id;
        }
        return std::nullopt;
    }

    Entry entry(uint32_t id) const {
        std::shared_lock lock(mu_);
        auto it = entries_.find(id);
        if (it == entries_.end()) throw UnknownEntry("no state table entry with that id");
        return it->second;
    }

    void update(uint32_t id, crypto::Pke::Ciphertext new_state) {
        std::unique_lock lock(mu_);
        auto it = entries_.find(id);
        if (it == entries_.end()) throw UnknownEntry("no state table entry with that id");
        it->second.enc_state = std::move(new_state);
    }

    void remove(uint32_t id) {
        std::unique_lock lock(mu_);
        if (entries_.erase(id) == 0) throw UnknownEntry("no state table entry with that id");
    }

    size_t size() const {
        std::shared_lock lock(mu_);
        return entries_.size();
    }

    void set_counters(crypto::OpCounters* c) { search_.set_counters(c); }

private:
    mutable std::shared_mutex mu_;
    crypto::Peks search_;
    std::map<uint32_t, Entry> entries_;
    uint32_t next_id_ = 1;
};

inline Bytes serialize_state_entry(const crypto::Peks& search, const crypto::Pke& box,
                                   const StateEntryMaterial& m) {
    Bytes out;
    put_u16(out, uint16_t(m.trapdoors.size()));
    for (const auto& td : m.trapdoors) {
        Bytes b = search.serialize(td);
        out.insert(out.end(), b.begin(), b.end());
    }
    Bytes s = box.serialize(m.enc_state);
    out.insert(out.end(), s.begin(), s.end());
    Bytes t = box.serialize(m.enc_tag);
    out.insert(out.end(), t.begin(), t.end());
    return out;
}

inline StateEntryMaterial parse_state_entry(const crypto::Peks& search, const crypto::Pke& box,
                                            const Bytes& wire) {
    if (wire.size() < 2) throw WireError("state entry message too short");
    StateEntryMaterial m;
    uint16_t count = get_u16(wire.data());
    size_t off = 2;
    for (uint16_t k = 0; k < count; ++k) {
        if (off + crypto::Peks::kTrapdoorBytes > wire.size())
            throw WireError("state entry message truncated");
        m.trapdoors.push_back(search.parse_trapdoor(wire.data() + off, wire.size() - off));
        off += crypto::Peks::kTrapdoorBytes;
    }
    size_t consumed = 0;
    m.enc_state = box.parse(wire.data() + off, wire.size() - off, &consumed);
    off += consumed;
    m.enc_tag = box.parse(wire.data() + off, wire.size() - off, &consumed);
    off += consumed;
    if (off != wire.size()) throw WireError("trailing bytes in state entry message");
    return m;
}

// Wire forms of the client's table maintenance messages:
// update is the 4-byte id followed by the new state ciphertext; deletion is
// the 4-byte id followed by the delete opcode.
inline constexpr uint8_t kStateOpDelete = 1;

inline Bytes encode_state_update(uint32_t id, const crypto::Pke& box,
                                 const crypto::Pke::Ciphertext& new_state) {
    Bytes out;
    put_u32(out, id);
    Bytes ct = box.serialize(new_state);
    out.insert(out.end(), ct.begin(), ct.end());
    return out;
}

struct StateUpdate {
    uint32_t id = 0;
    crypto::Pke::Ciphertext new_state;
};

inline StateUpdate parse_state_update(const crypto::Pke& box, const Bytes& wire) {
    if (wire.size() < 4) throw WireError("state update message too short");
    StateUpdate u;
    u.id = get_u32(wire.data());
    size_t consumed = 0;
    u.new_state = box.parse(wire.data() + 4, wire.size() - 4, &consumed);
    if (4 + consumed != wire.size()) throw WireError("trailing bytes in state update");
    return u;
}

inline Bytes encode_state_delete(uint32_t id) {
    Bytes out;
    put_u32(out, id);
    out.push_back(kStateOpDelete);
    return out;
}

inline uint32_t parse_state_delete(const Bytes& wire) {
    if (wire.size() != 5 || wire[4] != kStateOpDelete) throw WireError("malformed delete message");
    return get_u32(wire.data());
}

}  // namespace pnfv::schemes
