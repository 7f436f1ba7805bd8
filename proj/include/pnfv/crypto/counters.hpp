#pragma once

#include <atomic>
#include <cstdint>

namespace pnfv::crypto {

// Plain snapshot of operation counts, used in reports and audits.
struct OpCountSnapshot {
    uint64_t encryptions = 0;
    uint64_t decryptions = 0;
    uint64_t tests = 0;
    uint64_t pairings = 0;
    uint64_t dlogs = 0;

    OpCountSnapshot operator-(const OpCountSnapshot& o) const {
        return {encryptions - o.encryptions, decryptions - o.decryptions, tests - o.tests,
                pairings - o.pairings, dlogs - o.dlogs};
    }
    bool operator==(const OpCountSnapshot&) const = default;
};

// Counter semantics:
//   encryptions: fresh ciphertext creations (BGN, PEKS, PKE, mock-FHE)
//   decryptions: decrypt calls (BGN plaintext recovery, PKE, mock-FHE)
//   tests:       PEKS tests and BGN known-value checks
//   pairings:    bilinear-map invocations, including source-to-target lifts
//   dlogs:       baby-step giant-step solves attempted
// Atomic so concurrent packet pipelines can share one instance.
class OpCounters {
public:
    std::atomic<uint64_t> encryptions{0};
    std::atomic<uint64_t> decryptions{0};
    std::atomic<uint64_t> tests{0};
    std::atomic<uint64_t> pairings{0};
    std::atomic<uint64_t> dlogs{0};

    OpCountSnapshot snapshot() const {
        return {encryptions.load(), decryptions.load(), tests.load(), pairings.load(), dlogs.load()};
    }

    void reset() {
        encryptions = 0;
        decryptions = 0;
        tests = 0;
        pairings = 0;
        dlogs = 0;
    }
};

}  // namespace pnfv::crypto
