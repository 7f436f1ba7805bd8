#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pnfv/netfn/policy_file.hpp"
#include "pnfv/sim/roles.hpp"

namespace pnfv::sim {

// Scenario scripts, one directive per line ('#' starts a comment):
//   scheme <bgn|peks|fhe>
//   policies <file>                      relative to the script's directory
//   state <on|off>
//   inject <hex frame> expect <forward|drop>
// Frames are injected in order and the client's verdict is checked after
// each one has fully propagated.
struct ScenarioStep {
    Bytes frame;
    bool expect_forward = false;
    size_t line = 0;
};

struct Scenario {
    SimConfig cfg;
    std::vector<ScenarioStep> steps;
    bool has_scheme = false;
};

inline Scenario parse_scenario(std::istream& in, const std::filesystem::path& base_dir) {
    Scenario sc;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        auto fail = [&](const std::string& what) {
            throw ParseError("line " + std::to_string(lineno) + ": " + what);
        };
        if (word == "scheme") {
            std::string s;
            if (!(ls >> s)) fail("scheme needs a value");
            sc.cfg.scheme = scheme_choice_from_string(s);
            sc.has_scheme = true;
        } else if (word == "policies") {
            std::string rel;
            if (!(ls >> rel)) fail("policies needs a file");
            std::filesystem::path p = base_dir / rel;
            std::ifstream f(p);
            if (!f) throw Error("cannot open policy file: " + p.string());
            std::ostringstream text;
            text << f.rdbuf();
            sc.cfg.nf = netfn::parse_policy_file(text.str(), processing_layout());
        } else if (word == "state") {
            std::string s;
            if (!(ls >> s)) fail("state needs on or off");
            if (s == "on")
                sc.cfg.state_enabled = true;
            else if (s == "off")
                sc.cfg.state_enabled = false;
            else
                fail("state needs on or off");
        } else if (word == "inject") {
            std::string hex, kw, verdict;
            if (!(ls >> hex >> kw >> verdict) || kw != "expect") fail("inject <hex> expect <forward|drop>");
            ScenarioStep step;
            step.frame = from_hex(hex);
            step.line = lineno;
            if (verdict == "forward")
                step.expect_forward = true;
            else if (verdict == "drop")
                step.expect_forward = false;
            else
                fail("expected verdict forward or drop");
            sc.steps.push_back(std::move(step));
        } else {
            fail("unknown directive: " + word);
        }
    }
    return sc;
}

inline Scenario load_scenario(const std::filesystem::path& file) {
    std::ifstream f(file);
    if (!f) throw Error("cannot open scenario file: " + file.string());
    return parse_scenario(f, file.parent_path());
}

struct ScenarioResult {
    Trace trace;
    std::vector<Bytes> delivered;  // frames that reached the far host
    size_t checks = 0;
    std::vector<std::string> failures;
    bool passed() const { return failures.empty(); }
};

// Deterministic single-threaded event loop: one message drained at a time,
// in send order. Each role touches only its own state, so independent
// scenario runs may execute concurrently.
class Runner {
public:
    explicit Runner(Scenario sc) : sc_(std::move(sc)) {}

    ScenarioResult run() {
        ScenarioResult res;
        if (!sc_.has_scheme && sc_.steps.empty()) return res;  // nothing to do
        if (!sc_.has_scheme) throw Error("script injects frames but sets no scheme");

        Fabric fabric;
        ClientMb client(&sc_.cfg, &fabric, &res.trace);
        CloudMb cloud(&sc_.cfg, &fabric, &res.trace);
        EntryMb entry(&sc_.cfg, &fabric, &res.trace);
        switch (sc_.cfg.scheme) {
            case SchemeChoice::fhe: cloud.provision_fhe(client.fhe_public()); break;
            case SchemeChoice::bgn: cloud.provision_bgn(client.bgn_public()); break;
            case SchemeChoice::peks:
                cloud.provision_peks(client.search_public(), client.box_public());
                entry.provision(client.search_public(), client.box_public(), client.prp());
                break;
        }
        fabric.send({Role::client, Role::cloud, MsgKind::install, client.transform_wire()});
        pump(fabric, entry, cloud, client, res);

        for (const auto& step : sc_.steps) {
            size_t before = client.verdicts().size();
            fabric.send({Role::source, Role::entry, MsgKind::frame, step.frame});
            pump(fabric, entry, cloud, client, res);
            ++res.checks;
            if (client.verdicts().size() != before + 1) {
                res.failures.push_back("line " + std::to_string(step.line) + ": no verdict reached");
                continue;
            }
            bool got = client.verdicts().back().forward;
            if (got != step.expect_forward)
                res.failures.push_back("line " + std::to_string(step.line) + ": expected " +
                                       (step.expect_forward ? "forward" : "drop") + ", got " +
                                       (got ? "forward" : "drop"));
        }

        res.trace.log(Role::entry, "counters", counters_detail(entry.counters()));
        res.trace.log(Role::cloud, "counters_static", counters_detail(cloud.static_counters()));
        res.trace.log(Role::cloud, "counters_state", counters_detail(cloud.state_counters()));
        res.trace.log(Role::client, "counters", counters_detail(client.counters()));
        return res;
    }

private:
    void pump(Fabric& fabric, EntryMb& entry, CloudMb& cloud, ClientMb& client,
              ScenarioResult& res) {
        while (auto m = fabric.next()) {
            switch (m->to) {
                case Role::entry: entry.on_message(*m); break;
                case Role::cloud: cloud.on_message(*m); break;
                case Role::client: client.on_message(*m); break;
                case Role::sink:
                    res.trace.log(Role::sink, "rx_frame", "bytes=" + std::to_string(m->body.size()));
                    res.delivered.push_back(std::move(m->body));
                    break;
                case Role::source: throw Error("message addressed to the traffic source");
            }
        }
    }

    Scenario sc_;
};

}  // namespace pnfv::sim
