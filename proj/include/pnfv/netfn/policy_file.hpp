#pragma once

#include <sstream>
#include <string>

#include "pnfv/netfn/policy.hpp"

namespace pnfv::netfn {

// Text format, one policy per line, 1-based field indices:
//   eq <i> <y> set <j> <z>
//   range <i> <a> <b> set <j> <z>
// '#' starts a comment; blank lines are skipped.
inline NetworkFunction parse_policy_file(const std::string& text, const PacketLayout& layout) {
    NetworkFunction nf;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw ParseError("policy line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;

        Policy p;
        uint64_t i = 0;
        if (kw == "eq") {
            uint64_t y;
            if (!(ls >> i >> y)) fail("expected: eq <i> <y> set <j> <z>");
            p.match = EqualityMatch{uint16_t(i), uint32_t(y)};
            if (y > 0xffffffffull) fail("match value out of range");
        } else if (kw == "range") {
            uint64_t a, b;
            if (!(ls >> i >> a >> b)) fail("expected: range <i> <a> <b> set <j> <z>");
            if (a > 0xffffffffull || b > 0xffffffffull) fail("range bound out of range");
            p.match = RangeMatch{uint16_t(i), uint32_t(a), uint32_t(b)};
        } else {
            fail("unknown keyword '" + kw + "'");
        }
        std::string set_kw;
        uint64_t j, z;
        if (!(ls >> set_kw >> j >> z) || set_kw != "set") fail("expected: set <j> <z>");
        if (z > 0xffffffffull) fail("replacement value out of range");
        p.action = ReplaceAction{uint16_t(j), uint32_t(z)};
        std::string extra;
        if (ls >> extra) fail("trailing tokens after policy");

        if (i == 0 || i > layout.size() || j == 0 || j > layout.size()) fail("field index out of range");
        try {
            validate(p, layout);
        } catch (const Error& e) {
            fail(e.what());
        }
        nf.policies.push_back(std::move(p));
    }
    if (nf.policies.empty()) throw ParseError("policy file contains no policies");
    return nf;
}

}  // namespace pnfv::netfn
