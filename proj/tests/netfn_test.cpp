#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pnfv/netfn/layout.hpp"
#include "pnfv/netfn/packet.hpp"
#include "pnfv/netfn/policy.hpp"
#include "pnfv/netfn/policy_file.hpp"

using namespace pnfv;
using namespace pnfv::netfn;

namespace {

uint32_t ip(uint8_t a, uint8_t b, uint8_t c, uint8_t d) {
    return uint32_t(a) << 24 | uint32_t(b) << 16 | uint32_t(c) << 8 | d;
}

// Independent reference evaluator: literal transcription of
// psi(x) = m(x) a(x) + (1 - m(x)) x, folded left over the policy list.
Packet reference_eval(const NetworkFunction& nf, Packet x, const PacketLayout& layout) {
    for (const auto& p : nf.policies) {
        bool m;
        uint16_t i;
        if (std::holds_alternative<EqualityMatch>(p.match)) {
            auto eq = std::get<EqualityMatch>(p.match);
            i = eq.field;
            m = x.values[i - 1] == eq.value;
        } else {
            auto r = std::get<RangeMatch>(p.match);
            i = r.field;
            m = x.values[i - 1] >= r.lo && x.values[i - 1] <= r.hi;
        }
        (void)i;
        if (!m) continue;
        if (std::holds_alternative<ReplaceAction>(p.action)) {
            auto rep = std::get<ReplaceAction>(p.action);
            x.values[rep.field - 1] = rep.value;
        } else {
            auto add = std::get<AddAction>(p.action);
            uint64_t mod = layout.field(add.field).max_value() + 1;
            int64_t d = add.delta % int64_t(mod);
            if (d < 0) d += int64_t(mod);
            x.values[add.field - 1] = uint32_t((x.values[add.field - 1] + uint64_t(d)) % mod);
        }
    }
    return x;
}

}  // namespace

TEST_CASE("layout: ipv4 default shape", "[netfn]") {
    auto layout = ipv4_layout();
    REQUIRE(layout.size() == 8);
    CHECK(layout.field(1).name == "s_ip");
    CHECK(layout.field(1).bit_width == 32);
    CHECK(layout.field(3).bit_width == 16);
    CHECK(layout.field(5).bit_width == 8);
    CHECK(layout.field(6).is_virtual);
    CHECK(layout.index_of("tag") == 6);
    CHECK_THROWS_AS(layout.field(0), Error);
    CHECK_THROWS_AS(layout.field(9), Error);
    CHECK_THROWS_AS(layout.index_of("nope"), Error);
}

TEST_CASE("layout: constructor rejects bad specs", "[netfn]") {
    CHECK_THROWS_AS(PacketLayout({{2, 32, "a", false}}), Error);
    CHECK_THROWS_AS(PacketLayout({{1, 0, "a", false}}), Error);
    CHECK_THROWS_AS(PacketLayout({{1, 33, "a", false}}), Error);
}

TEST_CASE("packet: validation against widths", "[netfn]") {
    auto layout = ipv4_layout();
    auto p = Packet::zero(layout);
    p.set(5, 255);
    CHECK_NOTHROW(validate(p, layout));
    p.set(5, 256);
    CHECK_THROWS_AS(validate(p, layout), Error);
    Packet shrt{{1, 2, 3}};
    CHECK_THROWS_AS(validate(shrt, layout), Error);
}

TEST_CASE("eval: equality replace example", "[netfn]") {
    auto layout = uniform_layout(3);
    NetworkFunction nf{{Policy{EqualityMatch{1, 10}, ReplaceAction{2, 99}}}};
    CHECK(eval(nf, Packet{{10, 20, 30}}, layout) == Packet{{10, 99, 30}});
    CHECK(eval(nf, Packet{{11, 20, 30}}, layout) == Packet{{11, 20, 30}});
}

TEST_CASE("eval: no policy matches leaves the packet intact", "[netfn]") {
    auto layout = uniform_layout(4);
    NetworkFunction nf{{
        Policy{EqualityMatch{1, 7}, ReplaceAction{2, 1}},
        Policy{RangeMatch{3, 100, 200}, ReplaceAction{4, 2}},
    }};
    Packet x{{3, 9, 50, 60}};
    CHECK(eval(nf, x, layout) == x);
}

TEST_CASE("eval: address translation rewrite", "[netfn]") {
    // Destination (128.0.0.5, 5000) behind the gateway becomes
    // (196.0.0.5, 22): add 68.0.0.0 to the address and force the port.
    // The port policy must run first; once the address moves out of
    // 128/8 the second policy's own match no longer holds.
    PacketLayout layout({{1, 32, "d_ip", false}, {2, 16, "d_port", false}});
    Policy set_port{RangeMatch{1, ip(128, 0, 0, 0), ip(128, 255, 255, 255)}, ReplaceAction{2, 22}};
    Policy shift_ip{RangeMatch{1, ip(128, 0, 0, 0), ip(128, 255, 255, 255)},
                    AddAction{1, int64_t(ip(68, 0, 0, 0))}};

    NetworkFunction nat{{set_port, shift_ip}};
    CHECK(eval(nat, Packet{{ip(128, 0, 0, 5), 5000}}, layout) == Packet{{ip(196, 0, 0, 5), 22}});

    // Reversed order: the address moves first, so the port rule sees
    // 196.0.0.5, misses, and the port survives. Sequencing is strict.
    NetworkFunction reversed{{shift_ip, set_port}};
    CHECK(eval(reversed, Packet{{ip(128, 0, 0, 5), 5000}}, layout) ==
          Packet{{ip(196, 0, 0, 5), 5000}});
}

TEST_CASE("eval: add wraps modulo the field width", "[netfn]") {
    PacketLayout layout({{1, 8, "b", false}});
    NetworkFunction nf{{Policy{RangeMatch{1, 0, 255}, AddAction{1, 100}}}};
    CHECK(eval(nf, Packet{{200}}, layout) == Packet{{44}});
    NetworkFunction back{{Policy{RangeMatch{1, 0, 255}, AddAction{1, -100}}}};
    CHECK(eval(back, Packet{{44}}, layout) == Packet{{200}});
}

TEST_CASE("eval: range with equal bounds behaves as equality", "[netfn]") {
    auto layout = uniform_layout(2);
    std::mt19937_64 gen(7);
    for (int t = 0; t < 1000; ++t) {
        uint32_t y = uint32_t(gen());
        uint32_t v = (t % 2 == 0) ? y : uint32_t(gen());
        NetworkFunction as_eq{{Policy{EqualityMatch{1, y}, ReplaceAction{2, 5}}}};
        NetworkFunction as_range{{Policy{RangeMatch{1, y, y}, ReplaceAction{2, 5}}}};
        Packet x{{v, 0}};
        CHECK(eval(as_eq, x, layout) == eval(as_range, x, layout));
    }
}

TEST_CASE("eval: boundary values of a range match inclusively", "[netfn]") {
    auto layout = uniform_layout(2);
    NetworkFunction nf{{Policy{RangeMatch{1, 10, 20}, ReplaceAction{2, 1}}}};
    CHECK(eval(nf, Packet{{10, 0}}, layout).get(2) == 1);
    CHECK(eval(nf, Packet{{20, 0}}, layout).get(2) == 1);
    CHECK(eval(nf, Packet{{9, 0}}, layout).get(2) == 0);
    CHECK(eval(nf, Packet{{21, 0}}, layout).get(2) == 0);
}

TEST_CASE("eval: randomized agreement with the reference fold", "[netfn]") {
    std::mt19937_64 gen(42);
    for (int t = 0; t < 500; ++t) {
        uint16_t n = uint16_t(2 + gen() % 7);
        auto layout = uniform_layout(n, uint8_t(8 + 8 * (gen() % 4)));
        size_t np = 1 + gen() % 6;
        NetworkFunction nf;
        uint64_t maxv = layout.field(1).max_value();
        for (size_t k = 0; k < np; ++k) {
            Policy p;
            uint16_t i = uint16_t(1 + gen() % n);
            uint16_t j = uint16_t(1 + gen() % n);
            if (gen() % 2) {
                p.match = EqualityMatch{i, uint32_t(gen() % (maxv + 1))};
            } else {
                uint32_t a = uint32_t(gen() % (maxv + 1)), b = uint32_t(gen() % (maxv + 1));
                if (a > b) std::swap(a, b);
                p.match = RangeMatch{i, a, b};
            }
            if (gen() % 2)
                p.action = ReplaceAction{j, uint32_t(gen() % (maxv + 1))};
            else
                p.action = AddAction{j, int64_t(gen() % (2 * maxv)) - int64_t(maxv)};
            nf.policies.push_back(p);
        }
        Packet x;
        for (uint16_t f = 0; f < n; ++f) x.values.push_back(uint32_t(gen() % (maxv + 1)));
        // Bias half the runs toward guaranteed matches on the first policy.
        if (t % 2 == 0) {
            if (auto* eq = std::get_if<EqualityMatch>(&nf.policies[0].match))
                x.values[eq->field - 1] = eq->value;
            else {
                auto& r = std::get<RangeMatch>(nf.policies[0].match);
                x.values[r.field - 1] = r.lo;
            }
        }
        REQUIRE(eval(nf, x, layout) == reference_eval(nf, x, layout));
    }
}

TEST_CASE("eval: empty network function is rejected", "[netfn]") {
    auto layout = uniform_layout(2);
    CHECK_THROWS_AS(eval(NetworkFunction{}, Packet{{1, 2}}, layout), Error);
}

TEST_CASE("policy validation: width and index violations", "[netfn]") {
    auto layout = ipv4_layout();
    CHECK_THROWS_AS(validate(Policy{EqualityMatch{5, 300}, ReplaceAction{6, 1}}, layout), Error);
    CHECK_THROWS_AS(validate(Policy{EqualityMatch{1, 1}, ReplaceAction{5, 300}}, layout), Error);
    CHECK_THROWS_AS(validate(Policy{RangeMatch{3, 20, 10}, ReplaceAction{6, 1}}, layout), Error);
    CHECK_THROWS_AS(validate(Policy{RangeMatch{3, 0, 70000}, ReplaceAction{6, 1}}, layout), Error);
    CHECK_THROWS_AS(validate(Policy{EqualityMatch{9, 1}, ReplaceAction{6, 1}}, layout), Error);
    CHECK_NOTHROW(validate(Policy{EqualityMatch{1, 0xffffffff}, ReplaceAction{6, 2}}, layout));
}

TEST_CASE("policy file: parses rules and comments", "[netfn]") {
    auto layout = ipv4_layout();
    auto nf = parse_policy_file(
        "# block loopback source\n"
        "eq 1 2130706433 set 6 2\n"
        "\n"
        "range 3 1024 2048 set 6 1   # ephemeral band\n",
        layout);
    REQUIRE(nf.policies.size() == 2);
    auto eq = std::get<EqualityMatch>(nf.policies[0].match);
    CHECK(eq.field == 1);
    CHECK(eq.value == 2130706433u);  // 127.0.0.1
    CHECK(std::get<ReplaceAction>(nf.policies[0].action).value == 2);
    auto r = std::get<RangeMatch>(nf.policies[1].match);
    CHECK(r.lo == 1024u);
    CHECK(r.hi == 2048u);
}

TEST_CASE("policy file: errors carry line numbers", "[netfn]") {
    auto layout = ipv4_layout();
    auto check_line = [&](const std::string& text, const std::string& frag) {
        try {
            parse_policy_file(text, layout);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find(frag) != std::string::npos);
        }
    };
    check_line("eq 1 5 set 6 1\nbogus 2\n", "line 2");
    check_line("eq 1 5\n", "line 1");
    check_line("range 3 9 1 set 6 1\n", "out of order");
    check_line("eq 1 5 set 6 1 trailing\n", "trailing");
    check_line("eq 0 5 set 6 1\n", "index");
    check_line("eq 5 999 set 6 1\n", "width");
    CHECK_THROWS_AS(parse_policy_file("# only comments\n", layout), ParseError);
    CHECK_THROWS_AS(parse_policy_file("", layout), ParseError);
}
