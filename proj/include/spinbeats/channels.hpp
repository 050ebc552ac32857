// Kraus channels for thermal relaxation: generalized amplitude damping and
// dephasing, their decay parameters as functions of (t, T1, T2), randomized
// commutation certification, and the relaxed closed forms they reproduce.
#pragma once

#include <functional>
#include <string>

#include "spinbeats/density_matrix.hpp"

namespace spinbeats {

class Rng64;

struct QuantumChannel {
    std::size_t dim = 0;
    std::vector<ComplexMatrix> kraus;
    std::string label;

    // max | sum K^dagger K - I | ; completeness demands < 1e-12.
    double completeness_defect() const;
    void validate(double tol = 1e-12) const;
};

struct DecayParams {
    double p_x = 0.0;  // damping probability
    double p_z = 0.0;  // Z-flip probability
    double p_n = 1.0;  // Fermi temperature parameter (1 = zero temperature)
};

// Generalized amplitude damping with damping probability p_x and temperature
// parameter p_n (p_n = 1 recovers standard amplitude damping).
QuantumChannel gad_kraus(double p_x, double p_n);

// With probability p_z apply Z, otherwise do nothing. p_z in [0, 1/2].
QuantumChannel dephasing_kraus(double p_z);

// sum_i K_i rho K_i^dagger on the given qubit targets of a multi-qubit state.
DensityMatrix apply_channel(const QuantumChannel& ch, const DensityMatrix& rho,
                            const std::vector<std::size_t>& targets);

// Single-qubit channel on each listed qubit in turn.
DensityMatrix apply_on_each(const QuantumChannel& ch, const DensityMatrix& rho,
                            const std::vector<std::size_t>& qubits);

// Kraus set I_pre (x) K (x) I_post; lifts a channel onto a larger space
// (e.g. an electron channel tensored with the nuclear identity).
QuantumChannel lift_channel(const QuantumChannel& ch, std::size_t pre_dim, std::size_t post_dim);

// Apply a channel whose Kraus operators already match rho's dimension.
DensityMatrix apply_channel_dense(const QuantumChannel& ch, const DensityMatrix& rho);

// Damping and dephasing probabilities that make the zero-temperature channel
// E^0 = E_x . E_z satisfy rho_11 -> e^{-t/T1} rho_11 and
// rho_10 -> e^{-t/T2} rho_10:
//   p_x = 1 - e^{-t/T1},  p_z = (1 - e^{t/(2 T1) - t/T2}) / 2.
// The p_z exponent follows from sqrt(1-p_x) (1-2 p_z) = e^{-t/T2}; see the
// channel tests, which pin this against the closed-form relaxation oracle.
DecayParams decay_params(double t_ns, double t1_ns, double t2_ns);

// E^0 / E^infty composites (dephasing then damping; the order is immaterial
// because the two channels commute).
DensityMatrix apply_relaxation(const DecayParams& p, const DensityMatrix& rho,
                               const std::vector<std::size_t>& qubits);

using ChannelMap = std::function<DensityMatrix(const DensityMatrix&)>;
using StateSampler = std::function<DensityMatrix(Rng64&)>;

struct CommuteReport {
    bool commutes = false;
    double max_deviation = 0.0;
    std::uint64_t seed = 0;
};

// max over sampled states of |ch1(ch2(rho)) - ch2(ch1(rho))| (entrywise),
// compared against tol. States come from `sampler`; pass
// wishart_sampler(dim) for unstructured full-rank states.
CommuteReport commute_check(const ChannelMap& ch1, const ChannelMap& ch2,
                            const StateSampler& sampler, int trials, double tol,
                            std::uint64_t seed);

StateSampler wishart_sampler(std::size_t dim);

// Relaxed singlet probability given the isolated-system value S(t):
//   (1 + e^{-t/T1} + e^{-t/T2} (4 S - 2)) / 4.
double relaxed_closed_form(double s, double t_ns, double t1_ns, double t2_ns);

// Same with a semiclassical Gaussian dephasing term exp(-sigma^2 t^2) on the
// coherent part; reduces to relaxed_closed_form at sigma = 0.
double relaxed_gaussian(double s, double t_ns, double t1_ns, double t2_ns, double sigma);

}  // namespace spinbeats
