// Release-gate verification: channel completeness, the commutation suite,
// the decay-parameter condition and the closed-form pipeline oracles, each
// reported with its measured deviation and verdict.
#pragma once

#include <string>
#include <vector>

namespace spinbeats {

struct VerifyCheck {
    std::string name;
    std::string detail;       // what was compared / sampled
    double deviation = 0.0;   // measured extreme value
    double threshold = 0.0;   // pass bound
    bool require_above = false;  // for expected-noncommutation style checks
    bool passed = false;
};

std::vector<VerifyCheck> run_verify_suite(std::uint64_t seed = 20240901);

// JSON document for the report (machine-readable form used by the CLI).
std::string verify_report_json(const std::vector<VerifyCheck>& checks);

}  // namespace spinbeats
