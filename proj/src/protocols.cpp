#include "spinbeats/protocols.hpp"

#include <cmath>

#include "spinbeats/rng.hpp"

namespace spinbeats {

namespace {

constexpr double kSingularTol = 1e-12;

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

// weight of the Z branch combining plain and Gaussian dephasing
double dephasing_weight(double t_ns, double t1_ns, double t2_ns, double sigma) {
    const DecayParams p = decay_params(t_ns, t1_ns, t2_ns);
    const double factor_t2 = 1.0 - 2.0 * p.p_z;
    const double factor_sigma = std::exp(-sigma * sigma * t_ns * t_ns);
    return 0.5 * (1.0 - factor_t2 * factor_sigma);
}

DensityMatrix run_noiseless(const Circuit& c, std::size_t nqubits) {
    return run_density(c, nqubits, std::nullopt);
}

}  // namespace

Circuit singlet_prep() {
    return {Gate::x(0), Gate::x(1), Gate::h(0), Gate::cx(0, 1)};
}

Circuit bell_measure_map() {
    return {Gate::cx(0, 1), Gate::h(0)};
}

Circuit encode_singlet_t0(double s) {
    if (!(s >= 0.0 && s <= 1.0))
        throw std::invalid_argument("encode_singlet_t0: S outside [0,1]");
    // Rz(theta_t) on one qubit of the singlet, theta_t = 2 acos(sqrt(S)).
    // This keeps the |01> and |10> populations balanced (the states reached
    // by the actual pair dynamics share that symmetry), which the
    // single-qubit damping shortcut relies on.
    const double theta = 2.0 * std::acos(std::sqrt(s));
    Circuit c = singlet_prep();
    c.push_back(Gate::rz(0, theta));
    return c;
}

Populations populations_from_density(const DensityMatrix& mapped) {
    if (mapped.dim() != 4)
        throw std::invalid_argument("populations_from_density: expected a two-qubit state");
    Populations p;
    p.singlet = mapped.mat(3, 3).real();   // |11>
    p.t0 = mapped.mat(1, 1).real();        // |01>
    const double t_pm = 0.5 * (mapped.mat(0, 0).real() + mapped.mat(2, 2).real());
    p.t_plus = t_pm;
    p.t_minus = t_pm;
    return p;
}

Populations populations_from_counts(const ShotResult& counts, std::size_t qubit0) {
    Populations p;
    if (counts.shots == 0) return p;
    double p00 = 0.0, p01 = 0.0, p10 = 0.0, p11 = 0.0;
    for (const auto& [bits, n] : counts.counts) {
        const double w = static_cast<double>(n) / static_cast<double>(counts.shots);
        const char b0 = bits.at(qubit0);
        const char b1 = bits.at(qubit0 + 1);
        if (b0 == '0' && b1 == '0') p00 += w;
        else if (b0 == '0' && b1 == '1') p01 += w;
        else if (b0 == '1' && b1 == '0') p10 += w;
        else p11 += w;
    }
    p.singlet = p11;
    p.t0 = p01;
    p.t_plus = 0.5 * (p00 + p10);
    p.t_minus = p.t_plus;
    return p;
}

// ---- Kraus method --------------------------------------------------------

namespace {

struct KrausBranches {
    double w_z = 0.0;
    double p_x = 0.0;
};

KrausBranches kraus_parameters(double t_ns, double t1_ns, double t2_ns, double sigma) {
    KrausBranches b;
    b.w_z = dephasing_weight(t_ns, t1_ns, t2_ns, sigma);
    b.p_x = decay_params(t_ns, t1_ns, t2_ns).p_x;
    return b;
}

MethodResult kraus_exact(const Circuit& encode, const KrausBranches& b) {
    DensityMatrix rho = run_noiseless(encode, 2);
    rho = apply_channel(gad_kraus(b.p_x, 1.0), rho, {0});

    const Circuit map = bell_measure_map();
    DensityMatrix rho_noz = rho;
    for (const auto& g : map) {
        const ComplexMatrix u = embed_qubit_op(g.unitary(), g.targets, 2);
        rho_noz = DensityMatrix(u * rho_noz.mat * u.adjoint());
    }
    const ComplexMatrix zq0 = embed_qubit_op(Gate::z(0).unitary(), {0}, 2);
    DensityMatrix rho_z(zq0 * rho.mat * zq0.adjoint());
    for (const auto& g : map) {
        const ComplexMatrix u = embed_qubit_op(g.unitary(), g.targets, 2);
        rho_z = DensityMatrix(u * rho_z.mat * u.adjoint());
    }

    const Populations pz = populations_from_density(rho_z);
    const Populations pn = populations_from_density(rho_noz);
    MethodResult r;
    r.w_z = b.w_z;
    r.p11_with_z = pz.singlet;
    r.p11_without_z = pn.singlet;
    r.pops.singlet = b.w_z * pz.singlet + (1.0 - b.w_z) * pn.singlet;
    r.pops.t0 = b.w_z * pz.t0 + (1.0 - b.w_z) * pn.t0;
    r.pops.t_plus = b.w_z * pz.t_plus + (1.0 - b.w_z) * pn.t_plus;
    r.pops.t_minus = b.w_z * pz.t_minus + (1.0 - b.w_z) * pn.t_minus;
    r.s_estimate = r.pops.singlet;
    r.stderr_estimate = 0.0;
    return r;
}

MethodResult kraus_sampled(const Circuit& encode, const KrausBranches& b,
                           std::uint64_t shots, std::uint64_t seed) {
    // ancilla-based amplitude damping on qubit 0; ancilla is qubit 2
    const double phi = 2.0 * std::asin(std::sqrt(b.p_x));
    Circuit base = encode;
    base.push_back(Gate::cry(0, 2, phi));
    base.push_back(Gate::cx(2, 0));

    Circuit with_z = base;
    with_z.push_back(Gate::z(0));
    for (const auto& g : bell_measure_map()) {
        base.push_back(g);
        with_z.push_back(g);
    }

    std::uint64_t shots_z = static_cast<std::uint64_t>(std::llround(b.w_z * static_cast<double>(shots)));
    shots_z = std::min(shots_z, shots);
    const std::uint64_t shots_noz = shots - shots_z;

    MethodResult r;
    r.w_z = b.w_z;
    Populations pz, pn;
    double var = 0.0;
    if (shots_z > 0) {
        const ShotResult sz = sample(with_z, 3, std::nullopt, shots_z, mix_seed(seed, 0));
        pz = populations_from_counts(sz, 0);
        var += b.w_z * b.w_z * pz.singlet * (1.0 - pz.singlet) / static_cast<double>(shots_z);
    }
    if (shots_noz > 0) {
        const ShotResult sn = sample(base, 3, std::nullopt, shots_noz, mix_seed(seed, 1));
        pn = populations_from_counts(sn, 0);
        var += (1.0 - b.w_z) * (1.0 - b.w_z) * pn.singlet * (1.0 - pn.singlet) /
               static_cast<double>(shots_noz);
    }
    r.p11_with_z = pz.singlet;
    r.p11_without_z = pn.singlet;
    r.pops.singlet = b.w_z * pz.singlet + (1.0 - b.w_z) * pn.singlet;
    r.pops.t0 = b.w_z * pz.t0 + (1.0 - b.w_z) * pn.t0;
    r.pops.t_plus = b.w_z * pz.t_plus + (1.0 - b.w_z) * pn.t_plus;
    r.pops.t_minus = b.w_z * pz.t_minus + (1.0 - b.w_z) * pn.t_minus;
    r.s_estimate = r.pops.singlet;
    r.stderr_estimate = std::sqrt(var);
    return r;
}

}  // namespace

MethodResult kraus_method(double s_of_t, double t_ns, double t1_ns, double t2_ns,
                          std::uint64_t shots, std::uint64_t seed, double sigma) {
    if (!(s_of_t >= 0.0 && s_of_t <= 1.0))
        throw std::invalid_argument("kraus_method: S outside [0,1]");
    const KrausBranches b = kraus_parameters(t_ns, t1_ns, t2_ns, sigma);
    const Circuit encode = encode_singlet_t0(s_of_t);
    if (shots == 0) return kraus_exact(encode, b);
    return kraus_sampled(encode, b, shots, seed);
}

MethodResult kraus_correction(double t_ns, double t1_ns, double t2_ns,
                              std::uint64_t shots, std::uint64_t seed, double sigma) {
    const KrausBranches b = kraus_parameters(t_ns, t1_ns, t2_ns, sigma);
    if (shots == 0) return kraus_exact(singlet_prep(), b);
    return kraus_sampled(singlet_prep(), b, shots, seed);
}

// ---- inherent method -----------------------------------------------------

double echo_deviation(double t_ns, double t1_ns, int n_echo) {
    if (n_echo < 2 || n_echo % 2 != 0)
        throw std::invalid_argument("echo_deviation: n_echo must be even and >= 2");
    if (t_ns == 0.0) return 0.0;
    const double n = static_cast<double>(n_echo);
    const double sh = std::sinh(t_ns / (4.0 * n * t1_ns));
    const double ch = std::cosh(t_ns / (2.0 * n * t1_ns));
    const double inner = (std::exp(-t_ns / t1_ns) - 1.0) * sh * sh / ch;
    return inner * inner;
}

namespace {

// idle segments realizing echoes at (k+1/2) t/n: half, n-1 full, half
std::vector<double> echo_segments(double total, int n_echo) {
    std::vector<double> seg;
    seg.reserve(n_echo + 1);
    const double full = total / static_cast<double>(n_echo);
    seg.push_back(0.5 * full);
    for (int k = 0; k + 1 < n_echo; ++k) seg.push_back(full);
    seg.push_back(0.5 * full);
    return seg;
}

struct WallMapping {
    double t_wall = 0.0;
    double t1_eff = 0.0;  // per-qubit damping time in simulated units
};

// Simulated time t maps to wall time via N = t T_qu / (T_rp t_id) with
// T_rp the per-radical decay time. With pair-effective spec times this is
// T_rp = T1 + T2, which makes each qubit damp at the per-radical rate
// (half the pair rate) whenever the qubit T1/T2 ratio matches the target.
WallMapping wall_mapping(const SpinSystemSpec& spec, const NoiseModel& qubit, double t_ns) {
    if (qubit.is_noiseless() || (!std::isfinite(spec.t1_ns) && !std::isfinite(spec.t2_ns)))
        return {0.0, std::numeric_limits<double>::infinity()};
    const double t_rp = spec.t1_ns + spec.t2_ns;
    if (!(t_rp > 0.0) || !std::isfinite(t_rp))
        throw std::invalid_argument(
            "inherent_method: pair decay time must be positive and finite (an infinite target T1 "
            "needs the correction-circuit route)");
    const double t_qu = 0.5 * (qubit.t1_ns + qubit.t2_ns);
    if (!std::isfinite(t_qu))
        throw std::invalid_argument("inherent_method: qubit T1/T2 must be finite");
    WallMapping m;
    m.t_wall = t_ns * t_qu / t_rp;
    m.t1_eff = t_rp * qubit.t1_ns / t_qu;
    return m;
}

InherentResult run_inherent(const Circuit& evolution, const SpinSystemSpec& spec, double t_ns,
                            const NoiseModel& qubit, int n_echo, std::uint64_t shots,
                            std::uint64_t seed) {
    if (n_echo < 2 || n_echo % 2 != 0)
        throw std::invalid_argument("inherent_method: n_echo must be even and >= 2");
    qubit.validate();
    const WallMapping map = wall_mapping(spec, qubit, t_ns);

    // semiclassical Gaussian dephasing accumulated over the simulated time
    const double sigma = spec.sigma_rad_per_ns;
    const double p_sigma =
        sigma > 0.0 ? 0.5 * (1.0 - std::exp(-sigma * sigma * t_ns * t_ns)) : 0.0;

    InherentResult r;
    r.t_wall_ns = map.t_wall;

    DensityMatrix rho{ComplexMatrix::identity(1)};
    if (shots == 0) {
        rho = run_noiseless(evolution, 2);
        const std::vector<double> segs =
            map.t_wall > 0.0 ? echo_segments(map.t_wall, n_echo) : std::vector<double>{};
        const ComplexMatrix xx = embed_qubit_op(kron(Gate::x(0).unitary(), Gate::x(0).unitary()),
                                                {0, 1}, 2);
        for (std::size_t i = 0; i < segs.size(); ++i) {
            const DecayParams p = decay_params(segs[i], qubit.t1_ns, qubit.t2_ns);
            rho = apply_relaxation(p, rho, {0, 1});
            if (qubit.drift_rad_per_ns != 0.0) {
                const ComplexMatrix rz =
                    embed_qubit_op(Gate::rz(0, qubit.drift_rad_per_ns * segs[i]).unitary(), {0}, 2);
                const ComplexMatrix rz1 =
                    embed_qubit_op(Gate::rz(0, qubit.drift_rad_per_ns * segs[i]).unitary(), {1}, 2);
                rho = DensityMatrix(rz1 * (rz * rho.mat * rz.adjoint()) * rz1.adjoint());
            }
            if (i + 1 < segs.size()) rho = DensityMatrix(xx * rho.mat * xx.adjoint());
        }
    } else {
        Circuit circuit = evolution;
        long n_id = 0;
        if (map.t_wall > 0.0) {
            const double raw = map.t_wall / qubit.t_id_ns;
            const long unit = 2L * n_echo;
            n_id = std::max(unit, static_cast<long>(std::llround(raw / unit)) * unit);
            const long half = n_id / unit;  // gates per half segment
            auto idle_block = [&](long gates) {
                for (long g = 0; g < gates; ++g)
                    circuit.push_back(Gate::idle({0, 1}, qubit.t_id_ns));
            };
            idle_block(half);
            for (int k = 0; k < n_echo; ++k) {
                circuit.push_back(Gate::x(0));
                circuit.push_back(Gate::x(1));
                idle_block(k + 1 < n_echo ? 2 * half : half);
            }
        }
        r.n_id_gates = n_id;
        rho = run_density(circuit, 2, qubit);
        r.t_wall_ns = static_cast<double>(n_id) * qubit.t_id_ns;
    }

    if (p_sigma > 0.0) rho = apply_channel(dephasing_kraus(p_sigma), rho, {0});
    for (const auto& g : bell_measure_map()) {
        const ComplexMatrix u = embed_qubit_op(g.unitary(), g.targets, 2);
        rho = DensityMatrix(u * rho.mat * u.adjoint());
    }

    if (shots == 0) {
        r.pops = populations_from_density(rho);
        r.s_echo = r.pops.singlet;
        r.stderr_estimate = 0.0;
    } else {
        const ShotResult res = sample_from_density(rho, shots, seed);
        r.pops = populations_from_counts(res, 0);
        r.s_echo = r.pops.singlet;
        r.stderr_estimate =
            std::sqrt(std::max(0.0, r.s_echo * (1.0 - r.s_echo) / static_cast<double>(shots)));
    }

    if (std::isfinite(map.t1_eff) && t_ns > 0.0) {
        const double t1_realized =
            shots == 0 ? map.t1_eff : t_ns * qubit.t1_ns / std::max(r.t_wall_ns, 1e-300);
        r.s_corrected = r.s_echo + echo_deviation(t_ns, t1_realized, n_echo);
    } else {
        r.s_corrected = r.s_echo;
    }
    return r;
}

}  // namespace

InherentResult inherent_method(const SpinSystemSpec& spec, double t_ns, const NoiseModel& qubit,
                               int n_echo, std::uint64_t shots, std::uint64_t seed,
                               std::optional<double> precomputed_s) {
    spec.validate();
    Circuit evolution;
    if (spec.hfc.empty()) {
        evolution = singlet_prep();
        const double w1 = kGammaRadPerNsPerMT * spec.g1 * spec.field_mT;
        const double w2 = kGammaRadPerNsPerMT * spec.g2 * spec.field_mT;
        evolution.push_back(Gate::rz(0, w1 * t_ns));
        evolution.push_back(Gate::rz(1, w2 * t_ns));
    } else {
        const double s = precomputed_s ? *precomputed_s : singlet_probability(spec, t_ns);
        evolution = encode_singlet_t0(clamp01(s));
    }
    return run_inherent(evolution, spec, t_ns, qubit, n_echo, shots, seed);
}

InherentResult inherent_correction(const SpinSystemSpec& spec, double t_ns, const NoiseModel& qubit,
                                   int n_echo, std::uint64_t shots, std::uint64_t seed) {
    spec.validate();
    return run_inherent(singlet_prep(), spec, t_ns, qubit, n_echo, shots, seed);
}

// ---- correction circuits --------------------------------------------------

double correction_combine(const Populations& run, const Populations& corr) {
    return run.singlet * corr.singlet + run.t0 * corr.t0 + run.t_plus * corr.t_plus +
           run.t_minus * corr.t_minus;
}

Populations correction_apply(const Populations& undamped, const Populations& corr) {
    Populations out;
    out.singlet = correction_combine(undamped, corr);
    out.t0 = undamped.t0 * corr.singlet + undamped.singlet * corr.t0 +
             undamped.t_plus * corr.t_plus + undamped.t_minus * corr.t_minus;
    out.t_plus = undamped.t_plus + corr.t_plus - 4.0 * undamped.t_plus * corr.t_plus;
    out.t_minus = undamped.t_minus + corr.t_minus - 4.0 * undamped.t_minus * corr.t_minus;
    return out;
}

Populations correction_undo(const Populations& damped, const Populations& corr) {
    const double u_corr = 0.5 * (corr.t_plus + corr.t_minus);
    const double denom_t = 1.0 - 4.0 * u_corr;
    const double denom_s = corr.singlet - corr.t0;
    if (std::abs(denom_t) < kSingularTol || std::abs(denom_s) < kSingularTol)
        throw std::domain_error(
            "correction_undo: corrector at the 1/4 equilibrium point; inversion is singular");
    const double u_run = 0.5 * (damped.t_plus + damped.t_minus);
    const double u = (u_run - u_corr) / denom_t;
    const double diff = (damped.singlet - damped.t0) / denom_s;
    Populations out;
    out.t_plus = u;
    out.t_minus = u;
    out.singlet = 0.5 * ((1.0 - 2.0 * u) + diff);
    out.t0 = 0.5 * ((1.0 - 2.0 * u) - diff);
    return out;
}

double double_correction(const Populations& run_inherent, const Populations& corr_inherent,
                         const Populations& corr_kraus) {
    const Populations undamped = correction_undo(run_inherent, corr_inherent);
    return correction_combine(undamped, corr_kraus);
}

// ---- TR-MFE ----------------------------------------------------------------

double tr_mfe(double s_b, double s_0, double theta) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("tr_mfe: theta outside [0,1]");
    return (4.0 * theta * s_b + (1.0 - theta)) / (4.0 * theta * s_0 + (1.0 - theta));
}

double intensity(double f, double s, double theta) {
    if (f < 0.0) throw std::invalid_argument("intensity: F must be >= 0");
    return f * (theta * s + 0.25 * (1.0 - theta));
}

}  // namespace spinbeats
