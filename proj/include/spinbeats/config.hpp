// Run configuration: an INI-style file with [section] headers and key=value
// pairs. The fully resolved configuration serializes back to the same format
// with 17 significant digits, and every output file embeds that text so a
// run can be reproduced from its own header.
#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "spinbeats/circuit.hpp"
#include "spinbeats/experiments.hpp"

namespace spinbeats {

enum class MethodKind { Kraus, Inherent, InherentCorrection };

std::string method_name(MethodKind kind);
MethodKind method_from_name(const std::string& name);

struct MethodSettings {
    MethodKind kind = MethodKind::Kraus;
    std::uint64_t shots = 0;  // 0 selects exact density-matrix mode
    int n_echo = 4;
    NoiseModel qubit;
    // relaxation the double-correction step re-applies; defaults to the
    // system's own T1/T2
    double target_t1_ns = std::numeric_limits<double>::quiet_NaN();
    double target_t2_ns = std::numeric_limits<double>::quiet_NaN();
};

struct RunConfig {
    std::string preset_name = "dps";
    SystemPreset sys;
    MethodSettings method;
    GridSpec grid;
    NoiseStudyConfig noise_study;
    std::string out_csv;
    std::string out_svg;
    std::uint64_t seed = 1;

    void validate() const;  // throws std::invalid_argument with a message
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parse and fully resolve a config file; unknown sections or keys are
// errors. Values layer on top of the named preset.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Canonical serialization of the resolved config (round-trips bit-exactly
// through parse_config_text).
std::string serialize_config(const RunConfig& cfg);

// 17-significant-digit decimal form that reparses to the identical double.
std::string format_double(double v);

}  // namespace spinbeats
