#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "pnfv/netfn/packet.hpp"

namespace pnfv::netfn {

// Match side: exact value or closed interval on one field.
struct EqualityMatch {
    uint16_t field = 0;  // i
    uint32_t value = 0;  // y
};

struct RangeMatch {
    uint16_t field = 0;  // i
    uint32_t lo = 0;     // a
    uint32_t hi = 0;     // b, inclusive
};

// Action side: overwrite a field, or add a delta modulo the field width.
// The encrypted schemes support Replace only; Add exists for plaintext
// evaluation (rewrites such as address translation).
struct ReplaceAction {
    uint16_t field = 0;  // j
    uint32_t value = 0;  // z
};

struct AddAction {
    uint16_t field = 0;
    int64_t delta = 0;
};

struct Policy {
    std::variant<EqualityMatch, RangeMatch> match;
    std::variant<ReplaceAction, AddAction> action;
};

// An ordered, non-empty policy list. Policies are applied strictly in
// sequence: each match is evaluated on the output of the previous policy.
struct NetworkFunction {
    std::vector<Policy> policies;
};

inline void validate(const Policy& p, const PacketLayout& layout) {
    if (auto* eq = std::get_if<EqualityMatch>(&p.match)) {
        if (eq->value > layout.field(eq->field).max_value())
            throw Error("match value exceeds field width");
    } else {
        auto& r = std::get<RangeMatch>(p.match);
        const auto& f = layout.field(r.field);
        if (r.lo > r.hi) throw Error("range bounds out of order");
        if (r.hi > f.max_value()) throw Error("range bound exceeds field width");
    }
    if (auto* rep = std::get_if<ReplaceAction>(&p.action)) {
        if (rep->value > layout.field(rep->field).max_value())
            throw Error("replacement value exceeds field width");
    } else {
        layout.field(std::get<AddAction>(p.action).field);  // index check only; delta wraps
    }
}

inline void validate(const NetworkFunction& nf, const PacketLayout& layout) {
    if (nf.policies.empty()) throw Error("network function needs at least one policy");
    for (const auto& p : nf.policies) validate(p, layout);
}

inline bool matches(const Policy& p, const Packet& x) {
    if (auto* eq = std::get_if<EqualityMatch>(&p.match)) return x.get(eq->field) == eq->value;
    auto& r = std::get<RangeMatch>(p.match);
    uint32_t v = x.get(r.field);
    return v >= r.lo && v <= r.hi;
}

inline void apply_action(const Policy& p, Packet& x, const PacketLayout& layout) {
    if (auto* rep = std::get_if<ReplaceAction>(&p.action)) {
        x.set(rep->field, rep->value);
    } else {
        auto& add = std::get<AddAction>(p.action);
        uint64_t mod = layout.field(add.field).max_value() + 1;
        int64_t d = add.delta % int64_t(mod);
        if (d < 0) d += int64_t(mod);
        x.set(add.field, uint32_t((uint64_t(x.get(add.field)) + uint64_t(d)) % mod));
    }
}

// One policy: psi(x) = m(x) a(x) + (1 - m(x)) x.
inline Packet eval(const Policy& p, const Packet& x, const PacketLayout& layout) {
    Packet out = x;
    if (matches(p, x)) apply_action(p, out, layout);
    return out;
}

// Policy list: psi_N(... psi_1(x) ...).
inline Packet eval(const NetworkFunction& nf, const Packet& x, const PacketLayout& layout) {
    validate(nf, layout);
    Packet cur = x;
    for (const auto& p : nf.policies) cur = eval(p, cur, layout);
    return cur;
}

}  // namespace pnfv::netfn
