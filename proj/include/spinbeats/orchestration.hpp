// Grid orchestration: run one method over a time grid (each point an
// independent job with its own derived seed), assemble TR-MFE pairs, and
// drive the detector-noise study. Worker count is capped by the
// SPINBEATS_THREADS environment variable.
#pragma once

#include <functional>

#include "spinbeats/config.hpp"
#include "spinbeats/protocols.hpp"

namespace spinbeats {

int worker_count(std::size_t jobs);

// fn(i) for i in [0, n), spread over at most `threads` workers.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

struct SimPoint {
    double t_ns = 0.0;
    double s_est = 0.0;
    double s_exact = 0.0;   // relaxed closed form fed with the exact S(t)
    double stderr_est = 0.0;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
};

// One field variant over the whole grid. `spec` carries the system and its
// relaxation; the method settings select the protocol.
std::vector<SimPoint> run_method_grid(const SpinSystemSpec& spec, const MethodSettings& method,
                                      const std::vector<double>& times, std::uint64_t seed,
                                      int threads);

struct MfePoint {
    double t_ns = 0.0;
    double m_est = 0.0;
    double m_theory = 0.0;
};

std::vector<MfePoint> assemble_mfe(const std::vector<SimPoint>& high,
                                   const std::vector<SimPoint>& low, double theta);

}  // namespace spinbeats
