// Named presets for the two benchmark radical pairs, the recombination-rate
// model F(t), the detector-noise study on the reconstructed TR-MFE, and
// error metrics.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "spinbeats/spin_system.hpp"

namespace spinbeats {

struct FtParams {
    double a = 0.0;      // counts/ns
    double b = 0.0;      // counts/ns
    double t1_ns = 1.0;
    double t2_ns = 1.0;
    double alpha = 1.0;

    void validate() const;
};

// F(t) = A e^{-t/t1} + B (1 + t/t2)^{-alpha}.
double ft_model(double t_ns, const FtParams& p);

struct GridSpec {
    double start_ns = 0.0;
    double stop_ns = 60.0;
    int points = 121;

    std::vector<double> times() const;
    void validate() const;
};

struct SystemPreset {
    std::string name;
    SpinSystemSpec low;    // low-field spec
    SpinSystemSpec high;   // high-field spec
    double theta = 0.0;
    FtParams ft;
    double detector_sigma = 0.0;  // counts; Gaussian detector noise scale
    GridSpec grid;
    bool relaxation_required = false;  // T1/T2 must be supplied by the config
};

// "dps" (no HFC, T1 = T2 = 50 ns), "dps-hfc" (semiclassical HFC, 60 ns,
// sigma supplied by the caller), "tmp" (explicit HFC; T1/T2 supplied by the
// caller). Throws on unknown names.
SystemPreset preset(const std::string& name);
std::vector<std::string> preset_names();

struct NoiseStudyConfig {
    double sigma = 0.0;  // detector noise scale, counts
    double mu = 0.0;     // detector noise offset, counts
    int trials = 1000;
    std::uint64_t seed = 1;
};

struct NoisePoint {
    double t_ns = 0.0;
    double m_theory = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    double delta_prediction = 0.0;  // (sigma/I0) sqrt(1 + M^2)
    int rejected = 0;               // trials dropped because noisy I0 <= 0
};

// Add independent Gaussian detector noise to the theoretical high- and
// low-field intensities and reconstruct the TR-MFE ratio per trial.
std::vector<NoisePoint> noisy_mfe_study(const SystemPreset& sys, const NoiseStudyConfig& cfg,
                                        const std::vector<double>& times);

// Mean squared difference, reported as a percentage.
double mse_percent(const std::vector<double>& series, const std::vector<double>& reference);

}  // namespace spinbeats
