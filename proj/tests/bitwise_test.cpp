#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pnfv/netfn/bitwise.hpp"

using namespace pnfv;
using namespace pnfv::netfn;

TEST_CASE("bitwise: named examples", "[bitwise][netfn]") {
    CHECK(bit_eq(5, 5, 8) == 1);
    CHECK(bit_eq(5, 3, 8) == 0);
    CHECK(bit_eq(0, 0, 1) == 1);
    CHECK(bit_eq(255, 255, 8) == 1);

    CHECK(bit_geq(7, 7, 8) == 1);
    CHECK(bit_geq(9, 3, 8) == 1);
    CHECK(bit_geq(2, 5, 8) == 0);
    CHECK(bit_geq(0, 0, 8) == 1);
    CHECK(bit_geq(255, 0, 8) == 1);
    CHECK(bit_geq(0, 255, 8) == 0);

    CHECK(bit_leq(2, 5, 8) == 1);
    CHECK(bit_leq(5, 2, 8) == 0);
    CHECK(bit_leq(9, 9, 8) == 1);
}

TEST_CASE("bitwise: bounds are outputs 0 or 1 only", "[bitwise][netfn]") {
    std::mt19937_64 gen(3);
    for (int t = 0; t < 2000; ++t) {
        uint32_t a = uint32_t(gen()), b = uint32_t(gen());
        CHECK(bit_eq(a, b, 32) <= 1);
        CHECK(bit_geq(a, b, 32) <= 1);
        CHECK(bit_leq(a, b, 32) <= 1);
    }
}

TEST_CASE("bitwise: exhaustive 8-bit agreement with integer comparisons", "[bitwise][netfn]") {
    for (uint32_t a = 0; a < 256; ++a) {
        for (uint32_t b = 0; b < 256; ++b) {
            REQUIRE(bit_eq(a, b, 8) == uint64_t(a == b));
            REQUIRE(bit_geq(a, b, 8) == uint64_t(a >= b));
            REQUIRE(bit_leq(a, b, 8) == uint64_t(a <= b));
        }
    }
}

TEST_CASE("bitwise: random 32-bit agreement", "[bitwise][netfn]") {
    std::mt19937_64 gen(11);
    for (int t = 0; t < 3000; ++t) {
        uint32_t a = uint32_t(gen());
        uint32_t b = (t % 3 == 0) ? a : uint32_t(gen());
        REQUIRE(bit_eq(a, b, 32) == uint64_t(a == b));
        REQUIRE(bit_geq(a, b, 32) == uint64_t(a >= b));
        REQUIRE(bit_leq(a, b, 32) == uint64_t(a <= b));
    }
}

TEST_CASE("bitwise: width validation", "[bitwise][netfn]") {
    CHECK_THROWS_AS(bit_eq(1, 1, 0), Error);
    CHECK_THROWS_AS(bit_eq(1, 1, 33), Error);
    CHECK_THROWS_AS(bit_geq(1, 1, 0), Error);
    CHECK_THROWS_AS(bit_leq(1, 1, 40), Error);
}
