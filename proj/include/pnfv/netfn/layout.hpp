#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pnfv/common.hpp"

namespace pnfv::netfn {

// One packet attribute. Indices are 1-based throughout the public surface;
// width is in bits, at most 32.
struct FieldSpec {
    uint16_t index = 0;
    uint8_t bit_width = 0;
    std::string name;
    // True for attributes that exist only inside the protocol (verdict tag,
    // connection state, table id), never on the wire of the original packet.
    bool is_virtual = false;

    uint64_t max_value() const { return (uint64_t(1) << bit_width) - 1; }
};

class PacketLayout {
public:
    PacketLayout() = default;

    explicit PacketLayout(std::vector<FieldSpec> fields) : fields_(std::move(fields)) {
        for (size_t k = 0; k < fields_.size(); ++k) {
            const auto& f = fields_[k];
            if (f.index != k + 1) throw Error("layout indices must be 1..n in order");
            if (f.bit_width == 0 || f.bit_width > 32) throw Error("field width must be 1..32 bits");
        }
    }

    uint16_t size() const { return uint16_t(fields_.size()); }

    const FieldSpec& field(uint16_t index) const {
        if (index == 0 || index > fields_.size()) throw Error("field index out of range");
        return fields_[index - 1];
    }

    const std::vector<FieldSpec>& fields() const { return fields_; }

    uint16_t index_of(const std::string& name) const {
        for (const auto& f : fields_)
            if (f.name == name) return f.index;
        throw Error("no field named " + name);
    }

private:
    std::vector<FieldSpec> fields_;
};

// Virtual-field value encodings shared by every scheme.
constexpr uint16_t kTagAllow = 1;
constexpr uint16_t kTagDrop = 2;
constexpr uint16_t kStateNew = 1;
constexpr uint16_t kStateEst = 2;

// Default layout: the IPv4 5-tuple followed by the three virtual fields.
inline PacketLayout ipv4_layout() {
    return PacketLayout({
        {1, 32, "s_ip", false},
        {2, 32, "d_ip", false},
        {3, 16, "s_port", false},
        {4, 16, "d_port", false},
        {5, 8, "prot", false},
        {6, 16, "tag", true},
        {7, 16, "state", true},
        {8, 16, "id", true},
    });
}

// Uniform n-field layout used by benchmarks and randomized suites.
inline PacketLayout uniform_layout(uint16_t n, uint8_t bit_width = 32) {
    std::vector<FieldSpec> fs;
    fs.reserve(n);
    for (uint16_t i = 1; i <= n; ++i) fs.push_back({i, bit_width, "f" + std::to_string(i), false});
    return PacketLayout(std::move(fs));
}

}  // namespace pnfv::netfn
