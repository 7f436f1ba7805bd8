#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <sstream>

#include "pnfv/bench/bench.hpp"

using namespace pnfv;
using bench::BenchConfig;
using bench::BenchRow;

namespace {

BenchConfig quick(const std::string& scheme, uint16_t n, uint16_t N, uint64_t seed = 42) {
    BenchConfig cfg;
    cfg.scheme = scheme;
    cfg.n_fields = n;
    cfg.n_policies = N;
    cfg.seed = seed;
    cfg.trials = 3;
    return cfg;
}

const BenchRow& row(const std::vector<BenchRow>& rows, const std::string& phase) {
    for (const auto& r : rows)
        if (r.phase == phase) return r;
    FAIL("missing phase row: " << phase);
    return rows.front();
}

}  // namespace

TEST_CASE("benchmark rejects bad configurations", "[bench]") {
    BenchConfig cfg = quick("bgn", 5, 5);
    SECTION("unknown scheme") {
        cfg.scheme = "rsa";
        REQUIRE_THROWS_AS(bench::run_benchmark(cfg), Error);
    }
    SECTION("pairing backend is advertised but not built") {
        cfg.backend = "pairing";
        REQUIRE_THROWS_WITH(bench::run_benchmark(cfg),
                            Catch::Matchers::ContainsSubstring("exponent"));
    }
    SECTION("too few trials") {
        cfg.trials = 2;
        REQUIRE_THROWS_AS(bench::run_benchmark(cfg), Error);
    }
    SECTION("field count out of range") {
        cfg.n_fields = 31;
        REQUIRE_THROWS_AS(bench::run_benchmark(cfg), Error);
    }
    SECTION("match rate out of range") {
        cfg.match_rate = 1.5;
        REQUIRE_THROWS_AS(bench::run_benchmark(cfg), Error);
    }
}

TEST_CASE("workload generation is seeded and honest about matches", "[bench]") {
    BenchConfig cfg = quick("bgn", 8, 12, 7);

    auto a = bench::make_workload(cfg);
    auto b = bench::make_workload(cfg);
    REQUIRE(a.packet == b.packet);
    REQUIRE(a.nf.policies.size() == 12);
    REQUIRE(a.layout.size() == 8);

    // Even packet values against odd match values: no accidental matches.
    netfn::Packet probe = a.packet;
    auto out = netfn::eval(a.nf, probe, a.layout);
    REQUIRE(out == a.packet);

    cfg.match_rate = 1.0;
    auto m = bench::make_workload(cfg);
    REQUIRE(m.planted_match);
    auto hit = netfn::eval(m.nf, m.packet, m.layout);
    REQUIRE(hit != m.packet);
}

TEST_CASE("operation counts are exact and reproducible", "[bench]") {
    SECTION("equality transform emits 3n+2 ciphertexts per policy") {
        auto rows1 = bench::run_benchmark(quick("bgn", 5, 1));
        REQUIRE(row(rows1, "transform").ops.encryptions == 17);

        auto rows10 = bench::run_benchmark(quick("bgn", 5, 10));
        REQUIRE(row(rows10, "transform").ops.encryptions == 170);

        // Packet encryption cost must not depend on the policy count.
        REQUIRE(row(rows1, "entry_encrypt").ops.encryptions ==
                row(rows10, "entry_encrypt").ops.encryptions);
    }

    SECTION("searchable scheme scans every policy against every field") {
        auto rows = bench::run_benchmark(quick("peks", 5, 10));
        REQUIRE(row(rows, "cloud_process").ops.tests == 50);
        REQUIRE(row(rows, "client_decrypt").ops.decryptions == 5);
    }

    SECTION("same seed, same counts") {
        for (const std::string scheme : {"bgn", "peks", "fhe"}) {
            auto a = bench::run_benchmark(quick(scheme, 5, 5, 99));
            auto b = bench::run_benchmark(quick(scheme, 5, 5, 99));
            REQUIRE(a.size() == b.size());
            for (size_t i = 0; i < a.size(); ++i) {
                INFO(scheme << " " << a[i].phase);
                REQUIRE(a[i].ops.encryptions == b[i].ops.encryptions);
                REQUIRE(a[i].ops.decryptions == b[i].ops.decryptions);
                REQUIRE(a[i].ops.tests == b[i].ops.tests);
                REQUIRE(a[i].ops.pairings == b[i].ops.pairings);
                REQUIRE(a[i].ops.dlogs == b[i].ops.dlogs);
            }
        }
    }
}

TEST_CASE("csv output has the fixed column contract", "[bench]") {
    auto rows = bench::run_benchmark(quick("peks", 4, 3));
    std::ostringstream os;
    bench::write_csv(os, rows);

    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    REQUIRE(line ==
            "scheme,n_fields,n_policies,phase,median_ms,encryptions,decryptions,tests,"
            "pairings,dlogs");
    size_t body = 0;
    while (std::getline(is, line)) {
        ++body;
        CAPTURE(line);
        REQUIRE(std::count(line.begin(), line.end(), ',') == 9);
        REQUIRE(line.rfind("peks,4,3,", 0) == 0);
    }
    REQUIRE(body == 4);
}

TEST_CASE("sweeps cover the axis and audit structural counts", "[bench]") {
    BenchConfig base = quick("peks", 5, 1);
    auto rows = bench::sweep(base, bench::SweepAxis::policies, {1, 3, 5});
    REQUIRE(rows.size() == 12);

    auto audit = bench::audit_sweep(rows, bench::SweepAxis::policies);
    CAPTURE(audit.lines);
    REQUIRE(audit.ok);
    REQUIRE(audit.lines.size() == 3);

    REQUIRE_THROWS_WITH(bench::sweep(base, bench::SweepAxis::policies, {}),
                        Catch::Matchers::ContainsSubstring("empty"));
    REQUIRE_THROWS_AS(bench::sweep_axis_from_string("latency"), Error);
    REQUIRE(bench::sweep_axis_from_string("fields") == bench::SweepAxis::fields);
}

TEST_CASE("parallel trials agree with serial counts", "[bench]") {
    BenchConfig cfg = quick("fhe", 5, 4, 5);
    auto serial = bench::run_benchmark(cfg);
    cfg.parallel = true;
    auto par = bench::run_benchmark(cfg);
    REQUIRE(serial.size() == par.size());
    for (size_t i = 0; i < serial.size(); ++i) {
        REQUIRE(serial[i].ops.encryptions == par[i].ops.encryptions);
        REQUIRE(serial[i].ops.tests == par[i].ops.tests);
        REQUIRE(par[i].median_ms > 0.0);
    }
}
