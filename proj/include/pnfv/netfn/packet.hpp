#pragma once

#include <cstdint>
#include <vector>

#include "pnfv/netfn/layout.hpp"

namespace pnfv::netfn {

// A packet is the vector of its attribute values under a fixed layout.
struct Packet {
    std::vector<uint32_t> values;

    static Packet zero(const PacketLayout& layout) {
        Packet p;
        p.values.assign(layout.size(), 0);
        return p;
    }

    uint32_t get(uint16_t index) const {
        if (index == 0 || index > values.size()) throw Error("packet field index out of range");
        return values[index - 1];
    }

    void set(uint16_t index, uint32_t v) {
        if (index == 0 || index > values.size()) throw Error("packet field index out of range");
        values[index - 1] = v;
    }

    bool operator==(const Packet& o) const { return values == o.values; }
    bool operator!=(const Packet& o) const { return values != o.values; }
};

inline void validate(const Packet& p, const PacketLayout& layout) {
    if (p.values.size() != layout.size()) throw Error("packet length does not match layout");
    for (uint16_t i = 1; i <= layout.size(); ++i) {
        if (p.values[i - 1] > layout.field(i).max_value())
            throw Error("field " + layout.field(i).name + " value exceeds its width");
    }
}

}  // namespace pnfv::netfn
