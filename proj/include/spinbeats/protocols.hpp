// The three thermal-relaxation protocols (explicit Kraus, inherent qubit
// noise with echo pulses, correction circuits) plus TR-MFE assembly.
//
// Conventions shared by every protocol here:
//  - two system qubits; the measurement map sends |S> -> |11>, |T0> -> |01>,
//    and spreads |T+->/|T--> evenly over |00>, |10>;
//  - a SpinSystemSpec carries pair-effective T1/T2 (the times appearing in
//    the relaxed closed form); each emulated qubit therefore damps at half
//    the pair rate, i.e. the per-radical rate.
#pragma once

#include <cstdint>

#include "spinbeats/circuit.hpp"
#include "spinbeats/spin_system.hpp"

namespace spinbeats {

struct Populations {
    double singlet = 0.0;
    double t0 = 0.0;
    double t_plus = 0.0;
    double t_minus = 0.0;

    double sum() const { return singlet + t0 + t_plus + t_minus; }
};

// ---- circuit building blocks -------------------------------------------

// |00> -> |S>.
Circuit singlet_prep();

// Transform from the singlet/triplet basis for measurement (cX then H).
Circuit bell_measure_map();

// |00> -> sqrt(S)|S> + sqrt(1-S)|T0>; the amplitude is carried by one Ry.
Circuit encode_singlet_t0(double s);

// Populations read off a measurement-basis two-qubit state.
Populations populations_from_density(const DensityMatrix& mapped);
// Same from sampled counts; `qubit0` selects the first system bit when the
// bitstrings carry extra (ancilla) qubits.
Populations populations_from_counts(const ShotResult& counts, std::size_t qubit0 = 0);

// ---- explicit Kraus method ---------------------------------------------

struct MethodResult {
    double s_estimate = 0.0;
    double stderr_estimate = 0.0;  // 0 in exact mode
    Populations pops;
    // per-branch |11> probabilities and the Z-branch weight
    double p11_with_z = 0.0;
    double p11_without_z = 0.0;
    double w_z = 0.0;
};

// Encode S(t), damp one qubit with p_x from (t, T1, T2), run with and
// without Z and combine with weight w_z = p_z. shots == 0 selects exact
// density-matrix mode; shot mode uses the CRy + ancilla damping circuit and
// splits shots across the two branches proportionally to the weights.
// `sigma` adds the semiclassical Gaussian dephasing of the relaxed-Gaussian
// closed form.
MethodResult kraus_method(double s_of_t, double t_ns, double t1_ns, double t2_ns,
                          std::uint64_t shots, std::uint64_t seed, double sigma = 0.0);

// Kraus decoherence applied to the singlet with no time evolution.
MethodResult kraus_correction(double t_ns, double t1_ns, double t2_ns,
                              std::uint64_t shots, std::uint64_t seed, double sigma = 0.0);

// ---- inherent method ----------------------------------------------------

struct InherentResult {
    double s_echo = 0.0;       // P(11) of the echoed run
    double s_corrected = 0.0;  // s_echo plus the finite-n echo deviation
    double stderr_estimate = 0.0;
    Populations pops;
    double t_wall_ns = 0.0;  // backend wall time realizing the simulated t
    long n_id_gates = 0;     // 0 in exact mode
};

// Run the system's time evolution (Rz pair for no-HFC specs, otherwise the
// precomputed-S(t) encoding), then let the backend qubits decay for the
// mapped wall time with n_echo X(x)X pulses at the (k+1/2) t/n schedule.
// shots == 0 runs exact segment-resolved channels; otherwise the idle time
// is realized as identity gates (their count rounded to a multiple of
// 2 n_echo so the half/full/half segment pattern is exact).
InherentResult inherent_method(const SpinSystemSpec& spec, double t_ns,
                               const NoiseModel& qubit, int n_echo,
                               std::uint64_t shots, std::uint64_t seed,
                               std::optional<double> precomputed_s = std::nullopt);

// Same decoherence block applied to the bare singlet (no time evolution).
InherentResult inherent_correction(const SpinSystemSpec& spec, double t_ns,
                                   const NoiseModel& qubit, int n_echo,
                                   std::uint64_t shots, std::uint64_t seed);

// Residual between the echoed estimate and the infinite-temperature closed
// form for a finite even echo count:
//   ((e^{-t/T1} - 1) sinh^2(t/(4 n T1)) / cosh(t/(2 n T1)))^2
// where T1 is the per-qubit damping time in simulated units. The echoed
// run undershoots, so the corrected estimate is s_echo + echo_deviation.
double echo_deviation(double t_ns, double t1_ns, int n_echo);

// ---- correction circuits -------------------------------------------------

// S~ = S S' + T0 T0' + T+ T+' + T- T-'.
double correction_combine(const Populations& run, const Populations& corr);

// Forward population map of the relaxation described by `corr`.
Populations correction_apply(const Populations& undamped, const Populations& corr);

// Inverse of correction_apply. Throws std::domain_error in the singular
// regime (corr at the 1/4 equilibrium, where the information is destroyed).
Populations correction_undo(const Populations& damped, const Populations& corr);

// Undo the qubit decoherence of an inherent run, then re-apply the target
// decoherence measured by a Kraus corrector.
double double_correction(const Populations& run_inherent, const Populations& corr_inherent,
                         const Populations& corr_kraus);

// ---- TR-MFE assembly -----------------------------------------------------

// M = (4 theta S_B + (1-theta)) / (4 theta S_0 + (1-theta)).
double tr_mfe(double s_b, double s_0, double theta);

// I = F (theta S + (1-theta)/4).
double intensity(double f, double s, double theta);

}  // namespace spinbeats
