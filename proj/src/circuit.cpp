#include "spinbeats/circuit.hpp"

#include <cmath>
#include <sstream>

#include "spinbeats/rng.hpp"

namespace spinbeats {

namespace {

ComplexMatrix rz_matrix(double theta) {
    return ComplexMatrix{{std::exp(cplx(0.0, -0.5 * theta)), 0.0},
                         {0.0, std::exp(cplx(0.0, 0.5 * theta))}};
}

ComplexMatrix ry_matrix(double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    return ComplexMatrix{{c, -s}, {s, c}};
}

}  // namespace

ComplexMatrix Gate::unitary() const {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    switch (kind) {
        case GateKind::H:
            return ComplexMatrix{{inv_sqrt2, inv_sqrt2}, {inv_sqrt2, -inv_sqrt2}};
        case GateKind::X:
            return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}};
        case GateKind::Z:
            return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}};
        case GateKind::CX:
            return ComplexMatrix{{1.0, 0.0, 0.0, 0.0},
                                 {0.0, 1.0, 0.0, 0.0},
                                 {0.0, 0.0, 0.0, 1.0},
                                 {0.0, 0.0, 1.0, 0.0}};
        case GateKind::Ry:
            return ry_matrix(angle);
        case GateKind::Rz:
            return rz_matrix(angle);
        case GateKind::CRy: {
            ComplexMatrix u = ComplexMatrix::identity(4);
            const ComplexMatrix r = ry_matrix(angle);
            u(2, 2) = r(0, 0);
            u(2, 3) = r(0, 1);
            u(3, 2) = r(1, 0);
            u(3, 3) = r(1, 1);
            return u;
        }
        case GateKind::Identity:
            return ComplexMatrix::identity(std::size_t{1} << targets.size());
        case GateKind::Custom:
            if (!custom.is_unitary(1e-10))
                throw std::invalid_argument("Gate: custom matrix is not unitary");
            return custom;
    }
    throw std::invalid_argument("Gate: unknown kind");
}

void NoiseModel::validate() const {
    if (t_id_ns <= 0.0) throw std::invalid_argument("NoiseModel: t_id must be positive");
    if (std::isfinite(t1_ns) && t1_ns <= 0.0) throw std::invalid_argument("NoiseModel: T1 must be positive");
    if (std::isfinite(t2_ns) && t2_ns <= 0.0) throw std::invalid_argument("NoiseModel: T2 must be positive");
    if (std::isfinite(t2_ns) && t2_ns > 2.0 * t1_ns * (1.0 + 1e-12))
        throw std::invalid_argument("NoiseModel: T2 > 2*T1 is unphysical");
}

double ShotResult::probability_of(const std::string& bits) const {
    const auto it = counts.find(bits);
    if (it == counts.end() || shots == 0) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(shots);
}

DensityMatrix run_density(const Circuit& circuit, std::size_t nqubits,
                          const std::optional<NoiseModel>& noise) {
    if (noise) noise->validate();
    const std::size_t dim = std::size_t{1} << nqubits;
    ComplexMatrix rho(dim, dim);
    rho(0, 0) = 1.0;
    DensityMatrix state{ComplexMatrix(rho)};

    std::vector<std::size_t> all_qubits(nqubits);
    for (std::size_t q = 0; q < nqubits; ++q) all_qubits[q] = q;

    for (const auto& gate : circuit) {
        if (gate.targets.empty())
            throw std::invalid_argument("run_density: gate with no targets");
        for (std::size_t t : gate.targets)
            if (t >= nqubits) throw std::invalid_argument("run_density: gate target out of range");

        if (gate.kind != GateKind::Identity) {
            const ComplexMatrix u = embed_qubit_op(gate.unitary(), gate.targets, nqubits);
            state = DensityMatrix(u * state.mat * u.adjoint());
        }

        if (noise && gate.duration_ns > 0.0) {
            const DecayParams p = decay_params(gate.duration_ns, noise->t1_ns, noise->t2_ns);
            state = apply_relaxation(p, state, all_qubits);
            if (gate.kind == GateKind::Identity && noise->drift_rad_per_ns != 0.0) {
                const ComplexMatrix r = rz_matrix(noise->drift_rad_per_ns * gate.duration_ns);
                for (std::size_t q : all_qubits) {
                    const ComplexMatrix u = embed_qubit_op(r, {q}, nqubits);
                    state = DensityMatrix(u * state.mat * u.adjoint());
                }
            }
        }
    }
    return state;
}

ShotResult sample_from_density(const DensityMatrix& rho, std::uint64_t shots, std::uint64_t seed) {
    std::size_t nq = 0;
    while ((std::size_t{1} << nq) < rho.dim()) ++nq;
    std::vector<double> probs(rho.dim());
    for (std::size_t i = 0; i < rho.dim(); ++i) probs[i] = rho.mat(i, i).real();

    Rng64 rng(seed);
    const auto counts = rng.multinomial(probs, shots);
    ShotResult result;
    result.shots = shots;
    result.seed = seed;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        std::string bits(nq, '0');
        for (std::size_t b = 0; b < nq; ++b)
            if ((i >> (nq - 1 - b)) & 1u) bits[b] = '1';
        result.counts[bits] = counts[i];
    }
    return result;
}

namespace {

// One stochastic realization: dephasing is drawn as a random Rz per qubit
// per noisy gate instead of being applied as a channel.
DensityMatrix run_density_stochastic(const Circuit& circuit, std::size_t nqubits,
                                     const NoiseModel& noise, Rng64& rng) {
    const std::size_t dim = std::size_t{1} << nqubits;
    ComplexMatrix rho0(dim, dim);
    rho0(0, 0) = 1.0;
    DensityMatrix state{std::move(rho0)};

    for (const auto& gate : circuit) {
        if (gate.kind != GateKind::Identity) {
            const ComplexMatrix u = embed_qubit_op(gate.unitary(), gate.targets, nqubits);
            state = DensityMatrix(u * state.mat * u.adjoint());
        }
        if (gate.duration_ns <= 0.0) continue;
        const DecayParams p = decay_params(gate.duration_ns, noise.t1_ns, noise.t2_ns);
        const QuantumChannel damp = gad_kraus(p.p_x, 1.0);
        for (std::size_t q = 0; q < nqubits; ++q) {
            state = apply_channel(damp, state, {q});
            double theta = stochastic_rz_dephasing(std::min(p.p_z, 0.5 - 1e-15), rng);
            if (gate.kind == GateKind::Identity)
                theta += noise.drift_rad_per_ns * gate.duration_ns;
            if (theta != 0.0) {
                const ComplexMatrix u = embed_qubit_op(rz_matrix(theta), {q}, nqubits);
                state = DensityMatrix(u * state.mat * u.adjoint());
            }
        }
    }
    return state;
}

}  // namespace

ShotResult sample(const Circuit& circuit, std::size_t nqubits,
                  const std::optional<NoiseModel>& noise, std::uint64_t shots,
                  std::uint64_t seed) {
    if (shots == 0) throw std::invalid_argument("sample: shots must be > 0");
    if (noise && noise->per_shot_random_rz && !noise->is_noiseless()) {
        noise->validate();
        Rng64 rng(seed);
        const std::size_t dim = std::size_t{1} << nqubits;
        ShotResult result;
        result.shots = shots;
        result.seed = seed;
        std::vector<double> probs(dim);
        for (std::uint64_t s = 0; s < shots; ++s) {
            const DensityMatrix rho = run_density_stochastic(circuit, nqubits, *noise, rng);
            for (std::size_t i = 0; i < dim; ++i) probs[i] = rho.mat(i, i).real();
            const auto one = rng.multinomial(probs, 1);
            for (std::size_t i = 0; i < dim; ++i) {
                if (one[i] == 0) continue;
                std::string bits(nqubits, '0');
                for (std::size_t b = 0; b < nqubits; ++b)
                    if ((i >> (nqubits - 1 - b)) & 1u) bits[b] = '1';
                ++result.counts[bits];
            }
        }
        return result;
    }
    return sample_from_density(run_density(circuit, nqubits, noise), shots, seed);
}

double stochastic_rz_dephasing(double p, Rng64& rng) {
    if (!(p >= 0.0 && p < 0.5))
        throw std::invalid_argument("stochastic_rz_dephasing: p must lie in [0, 1/2)");
    if (p == 0.0) return 0.0;
    const double variance = std::log(1.0 / ((1.0 - 2.0 * p) * (1.0 - 2.0 * p)));
    return rng.normal(0.0, std::sqrt(variance));
}

std::string dump_circuit(const Circuit& circuit) {
    static const char* names[] = {"H", "X", "Z", "CX", "RY", "RZ", "CRY", "ID", "CUSTOM"};
    std::ostringstream os;
    for (const auto& g : circuit) {
        os << names[static_cast<int>(g.kind)];
        for (std::size_t t : g.targets) os << ' ' << t;
        os << ' ' << g.angle << ' ' << g.duration_ns << '\n';
    }
    return os.str();
}

}  // namespace spinbeats
