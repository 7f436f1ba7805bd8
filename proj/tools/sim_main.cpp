// Scenario CLI: runs scripted middlebox scenarios and prints the message
// trace, plus a frame synthesizer for writing scenario fixtures.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pnfv/sim/scenario.hpp"

using namespace pnfv;

namespace {

uint32_t parse_ip(const std::string& dotted) {
    unsigned a, b, c, d;
    char tail;
    if (std::sscanf(dotted.c_str(), "%u.%u.%u.%u%c", &a, &b, &c, &d, &tail) != 4 || a > 255 ||
        b > 255 || c > 255 || d > 255)
        throw Error("bad IPv4 address: " + dotted);
    return a << 24 | b << 16 | c << 8 | d;
}

uint8_t parse_flags(const std::string& csv) {
    uint8_t flags = 0;
    std::istringstream is(csv);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok == "syn")
            flags |= sim::kTcpSyn;
        else if (tok == "ack")
            flags |= sim::kTcpAck;
        else if (tok == "fin")
            flags |= sim::kTcpFin;
        else if (!tok.empty())
            throw Error("unknown TCP flag: " + tok);
    }
    return flags;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scripted three-middlebox simulator"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "execute a scenario script");
    std::string script;
    std::string trace_path;
    bool quiet = false;
    run_cmd->add_option("script", script, "scenario file")->required();
    run_cmd->add_option("--trace", trace_path, "write the trace TSV here instead of stdout");
    run_cmd->add_flag("--quiet", quiet, "suppress the trace, print only the verdict summary");

    auto* frame_cmd = app.add_subcommand("frame", "print a synthesized frame as hex");
    std::string src = "10.0.0.1", dst = "10.0.0.9", proto = "tcp", flags_csv;
    unsigned sport = 40000, dport = 443;
    frame_cmd->add_option("--src-ip", src, "source address")->capture_default_str();
    frame_cmd->add_option("--dst-ip", dst, "destination address")->capture_default_str();
    frame_cmd->add_option("--sport", sport, "source port")->capture_default_str();
    frame_cmd->add_option("--dport", dport, "destination port")->capture_default_str();
    frame_cmd->add_option("--proto", proto, "tcp or udp")->capture_default_str();
    frame_cmd->add_option("--flags", flags_csv, "TCP flags, comma-separated: syn,ack,fin");

    CLI11_PARSE(app, argc, argv);

    try {
        if (frame_cmd->parsed()) {
            Bytes f;
            if (proto == "tcp")
                f = sim::build_tcp_frame(parse_ip(src), parse_ip(dst), uint16_t(sport),
                                         uint16_t(dport), parse_flags(flags_csv));
            else if (proto == "udp")
                f = sim::build_udp_frame(parse_ip(src), parse_ip(dst), uint16_t(sport),
                                         uint16_t(dport));
            else
                throw Error("unknown protocol: " + proto);
            std::printf("%s\n", to_hex(f).c_str());
            return 0;
        }

        auto sc = sim::load_scenario(script);
        auto res = sim::Runner(std::move(sc)).run();

        if (!trace_path.empty()) {
            std::ofstream f(trace_path);
            if (!f) throw Error("cannot open trace file: " + trace_path);
            res.trace.write_tsv(f);
        } else if (!quiet) {
            res.trace.write_tsv(std::cout);
        }

        std::printf("checks: %zu  delivered: %zu  failures: %zu\n", res.checks,
                    res.delivered.size(), res.failures.size());
        for (const auto& f : res.failures) std::printf("  %s\n", f.c_str());
        return res.passed() ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
