#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>

#include "pnfv/common.hpp"

namespace pnfv::sim {

enum class Role : uint8_t { source, entry, cloud, client, sink };

inline const char* to_string(Role r) {
    switch (r) {
        case Role::source: return "source";
        case Role::entry: return "entry";
        case Role::cloud: return "cloud";
        case Role::client: return "client";
        case Role::sink: return "sink";
    }
    return "?";
}

enum class MsgKind : uint8_t {
    frame,         // raw frame (source->entry, entry->cloud in plaintext configs, client->sink)
    overlay,       // encapsulated packet (entry->cloud in the hidden-tuple config, cloud->client)
    install,       // serialized transformed function (client->cloud at setup)
    registration,  // serialized state-table entry (client->cloud)
    state_update,  // id || new state ciphertext (client->cloud)
    state_delete,  // id || delete opcode (client->cloud)
};

inline const char* to_string(MsgKind k) {
    switch (k) {
        case MsgKind::frame: return "frame";
        case MsgKind::overlay: return "overlay";
        case MsgKind::install: return "install";
        case MsgKind::registration: return "registration";
        case MsgKind::state_update: return "state_update";
        case MsgKind::state_delete: return "state_delete";
    }
    return "?";
}

struct Message {
    Role from = Role::source;
    Role to = Role::source;
    MsgKind kind = MsgKind::frame;
    Bytes body;
};

// Lossless in-order delivery: one FIFO, drained strictly in send order, which
// preserves order per directed role pair as well. No loss, no reordering.
class Fabric {
public:
    void send(Message m) { q_.push_back(std::move(m)); }

    std::optional<Message> next() {
        if (q_.empty()) return std::nullopt;
        Message m = std::move(q_.front());
        q_.pop_front();
        return m;
    }

    bool empty() const { return q_.empty(); }
    size_t pending() const { return q_.size(); }

private:
    std::deque<Message> q_;
};

}  // namespace pnfv::sim
