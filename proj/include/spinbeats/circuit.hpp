// Gate-level density-matrix simulator with a zero-temperature noisy-qubit
// backend and binomial shot sampling. Noise is attached to wall time: every
// gate of duration d is followed by amplitude damping and dephasing on each
// qubit of the register, with probabilities set by (d, T1q, T2q).
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "spinbeats/channels.hpp"
#include "spinbeats/density_matrix.hpp"

namespace spinbeats {

class Rng64;

enum class GateKind { H, X, Z, CX, Ry, Rz, CRy, Identity, Custom };

struct Gate {
    GateKind kind = GateKind::Identity;
    std::vector<std::size_t> targets;
    double angle = 0.0;        // Ry/Rz/CRy parameter
    double duration_ns = 0.0;  // simulated backend wall time
    ComplexMatrix custom;      // unitary for GateKind::Custom

    static Gate make(GateKind kind, std::vector<std::size_t> targets, double angle = 0.0) {
        Gate g;
        g.kind = kind;
        g.targets = std::move(targets);
        g.angle = angle;
        return g;
    }
    static Gate h(std::size_t q) { return make(GateKind::H, {q}); }
    static Gate x(std::size_t q) { return make(GateKind::X, {q}); }
    static Gate z(std::size_t q) { return make(GateKind::Z, {q}); }
    static Gate cx(std::size_t control, std::size_t target) {
        return make(GateKind::CX, {control, target});
    }
    static Gate ry(std::size_t q, double theta) { return make(GateKind::Ry, {q}, theta); }
    static Gate rz(std::size_t q, double theta) { return make(GateKind::Rz, {q}, theta); }
    static Gate cry(std::size_t control, std::size_t target, double theta) {
        return make(GateKind::CRy, {control, target}, theta);
    }
    static Gate idle(std::vector<std::size_t> qs, double duration) {
        Gate g = make(GateKind::Identity, std::move(qs));
        g.duration_ns = duration;
        return g;
    }
    static Gate custom_unitary(std::vector<std::size_t> qs, ComplexMatrix u) {
        Gate g = make(GateKind::Custom, std::move(qs));
        g.custom = std::move(u);
        return g;
    }

    ComplexMatrix unitary() const;  // the dense matrix on the target qubits
};

using Circuit = std::vector<Gate>;

struct NoiseModel {
    double t1_ns = std::numeric_limits<double>::infinity();
    double t2_ns = std::numeric_limits<double>::infinity();
    double t_id_ns = 1.0;            // duration of one identity gate
    double drift_rad_per_ns = 0.0;   // residual Rz drift during idle time
    bool per_shot_random_rz = false; // stochastic-Rz dephasing variant

    void validate() const;
    bool is_noiseless() const {
        return !std::isfinite(t1_ns) && !std::isfinite(t2_ns) && drift_rad_per_ns == 0.0;
    }
};

struct ShotResult {
    std::map<std::string, std::uint64_t> counts;  // bitstring (qubit 0 leftmost) -> count
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;

    double probability_of(const std::string& bits) const;
};

// Execute the circuit on |0...0><0...0|; with a noise model, each gate is
// followed by per-qubit damping/dephasing scaled by the gate duration, and
// idle drift appends Rz(drift * d) on every qubit.
DensityMatrix run_density(const Circuit& circuit, std::size_t nqubits,
                          const std::optional<NoiseModel>& noise = std::nullopt);

// Multinomial draw from the computational-basis diagonal of run_density.
ShotResult sample(const Circuit& circuit, std::size_t nqubits,
                  const std::optional<NoiseModel>& noise, std::uint64_t shots,
                  std::uint64_t seed);

ShotResult sample_from_density(const DensityMatrix& rho, std::uint64_t shots, std::uint64_t seed);

// One Rz angle for the per-shot stochastic dephasing variant: normal with
// mean 0 and variance log((1-2p)^-2), so that the ensemble coherence factor
// E[e^{i theta}] converges to 1-2p. Requires p in [0, 1/2).
double stochastic_rz_dephasing(double p, Rng64& rng);

// Debug dump, one line per gate: "GATE targets theta duration".
std::string dump_circuit(const Circuit& circuit);

}  // namespace spinbeats
