#include "spinbeats/verify_suite.hpp"

#include <cmath>

#include "json.hpp"
#include "spinbeats/experiments.hpp"
#include "spinbeats/protocols.hpp"
#include "spinbeats/rng.hpp"

namespace spinbeats {

namespace {

constexpr double kVerifyTmpTau = 10.0;  // internal test value; user runs set their own

// electron-space channel of the unitary pair evolution with mixed nuclei
class ElectronChannel {
public:
    explicit ElectronChannel(const SpinSystemSpec& spec)
        : eig_(eig_hermitian(build_hamiltonian(spec))), nuclear_dim_(spec.nuclear_dim()) {}

    DensityMatrix apply(const DensityMatrix& rho_e, double t) const {
        std::vector<cplx> phases(eig_.values.size());
        for (std::size_t j = 0; j < phases.size(); ++j)
            phases[j] = std::exp(cplx(0.0, -eig_.values[j] * t));
        const ComplexMatrix u = hermitian_apply(eig_, phases);
        ComplexMatrix nuc = ComplexMatrix::identity(nuclear_dim_);
        nuc *= cplx(1.0 / static_cast<double>(nuclear_dim_), 0.0);
        DensityMatrix full(kron(rho_e.mat, nuc));
        DensityMatrix evolved(u * full.mat * u.adjoint());
        if (nuclear_dim_ == 1) return evolved;
        return partial_trace(evolved, {4, nuclear_dim_}, {0});
    }

private:
    EigenSystem eig_;
    std::size_t nuclear_dim_;
};

DensityMatrix infinite_temperature_pair(const DensityMatrix& rho_e, double t, double t1, double t2) {
    DecayParams p = decay_params(t, 2.0 * t1, 2.0 * t2);
    const QuantumChannel ex = gad_kraus(p.p_x, 0.5);
    const QuantumChannel ez = dephasing_kraus(p.p_z);
    DensityMatrix out = rho_e;
    for (std::size_t q : {std::size_t{0}, std::size_t{1}}) {
        out = apply_channel(ez, out, {q});
        out = apply_channel(ex, out, {q});
    }
    return out;
}

double singlet_expectation(const DensityMatrix& rho_e) {
    const auto s = singlet_ket();
    cplx val = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) val += std::conj(s[i]) * rho_e.mat(i, j) * s[j];
    return val.real();
}

VerifyCheck check_completeness(std::uint64_t seed) {
    Rng64 rng(seed);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double px = rng.uniform(), pn = rng.uniform(), pz = 0.5 * rng.uniform();
        worst = std::max(worst, gad_kraus(px, pn).completeness_defect());
        worst = std::max(worst, dephasing_kraus(pz).completeness_defect());
    }
    return {"kraus_completeness", "gad and dephasing over 50 random parameter draws", worst, 1e-12,
            false, worst < 1e-12};
}

VerifyCheck check_xz_commutation(std::uint64_t seed) {
    Rng64 param_rng(seed);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double px = param_rng.uniform();
        const double pz = 0.5 * param_rng.uniform();
        const double pn = param_rng.uniform();
        const ChannelMap ex = [&](const DensityMatrix& r) {
            return apply_channel(gad_kraus(px, pn), r, {0});
        };
        const ChannelMap ez = [&](const DensityMatrix& r) {
            return apply_channel(dephasing_kraus(pz), r, {0});
        };
        const CommuteReport rep = commute_check(ex, ez, wishart_sampler(2), 10, 1e-12, seed + i);
        worst = std::max(worst, rep.max_deviation);
    }
    return {"damping_dephasing_commute", "100 random single-qubit states and parameter draws",
            worst, 1e-12, false, worst < 1e-12};
}

VerifyCheck check_decay_condition(std::uint64_t seed) {
    Rng64 rng(seed);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const DensityMatrix rho = random_density(2, rng);
        const double t1 = 20.0 + 80.0 * rng.uniform();
        const double t2 = std::min(2.0 * t1, 10.0 + 100.0 * rng.uniform());
        const double t = 80.0 * rng.uniform();
        const DecayParams p = decay_params(t, t1, t2);
        const DensityMatrix out = apply_relaxation(p, rho, {0});
        worst = std::max(worst, std::abs(out.mat(1, 1) - rho.mat(1, 1) * std::exp(-t / t1)));
        worst = std::max(worst, std::abs(out.mat(1, 0) - rho.mat(1, 0) * std::exp(-t / t2)));
    }
    return {"decay_params_exponentials",
            "E^0 from decay_params sends rho_11 to e^{-t/T1} rho_11 and rho_10 to e^{-t/T2} rho_10",
            worst, 1e-12, false, worst < 1e-12};
}

VerifyCheck check_pz_sign_sensitivity(std::uint64_t seed) {
    // the alternative printed exponent must fail the same condition
    Rng64 rng(seed);
    const DensityMatrix rho = random_density(2, rng);
    const double t = 30.0, t1 = 50.0, t2 = 50.0;
    const double pz_alt = 0.5 * (1.0 - std::exp(-t / (2.0 * t1) - t / t2));
    DensityMatrix out = apply_channel(dephasing_kraus(pz_alt), rho, {0});
    out = apply_channel(gad_kraus(1.0 - std::exp(-t / t1), 1.0), out, {0});
    const double dev = std::abs(out.mat(1, 0) - rho.mat(1, 0) * std::exp(-t / t2));
    return {"pz_sign_mutation_detected",
            "flipping the sign in the p_z exponent visibly breaks the T2 condition", dev, 1e-3,
            true, dev > 1e-3};
}

VerifyCheck check_evolution_commutation(std::uint64_t seed) {
    double worst = 0.0;
    for (double field : {0.0, 100.0}) {
        SpinSystemSpec spec;
        spec.field_mT = field;
        spec.hfc = {{1, 1.0, 1.8}, {1, 0.5, -1.87}};
        spec.t1_ns = kVerifyTmpTau;
        spec.t2_ns = kVerifyTmpTau;
        const ElectronChannel e_u(spec);
        for (double t : {7.0, 21.0}) {
            const ChannelMap evo = [&](const DensityMatrix& r) { return e_u.apply(r, t); };
            const ChannelMap einf = [&](const DensityMatrix& r) {
                return infinite_temperature_pair(r, t, spec.t1_ns, spec.t2_ns);
            };
            const CommuteReport rep = commute_check(evo, einf, wishart_sampler(4), 15, 1e-10, seed);
            worst = std::max(worst, rep.max_deviation);
        }
    }
    return {"evolution_commutes_with_infinite_temperature",
            "lifted pair channel against the electron-subsystem evolution, both fields", worst,
            1e-10, false, worst < 1e-10};
}

VerifyCheck check_zero_temperature_noncommutation(std::uint64_t seed) {
    SpinSystemSpec spec;
    spec.field_mT = 0.0;
    spec.hfc = {{1, 1.0, 1.8}, {1, 0.5, -1.87}};
    spec.t1_ns = kVerifyTmpTau;
    spec.t2_ns = kVerifyTmpTau;
    const ElectronChannel e_u(spec);
    double worst = 0.0;
    for (double t : {5.0, 13.0, 25.0}) {
        const ChannelMap evo = [&](const DensityMatrix& r) { return e_u.apply(r, t); };
        const ChannelMap ezero = [&](const DensityMatrix& r) {
            const DecayParams p = decay_params(t, 2.0 * spec.t1_ns, 2.0 * spec.t2_ns);
            return apply_relaxation(p, r, {0, 1});
        };
        const CommuteReport rep = commute_check(evo, ezero, wishart_sampler(4), 15, 1e-10, seed);
        worst = std::max(worst, rep.max_deviation);
    }
    return {"zero_temperature_does_not_commute",
            "the finite-temperature channel must visibly fail to commute with the evolution",
            worst, 1e-3, true, worst > 1e-3};
}

VerifyCheck check_closed_form_pipeline() {
    double worst = 0.0;
    // dps: no couplings
    {
        SpinSystemSpec spec;
        spec.g1 = 2.0028;
        spec.g2 = 2.0082;
        spec.field_mT = 17.0;
        spec.t1_ns = 50.0;
        spec.t2_ns = 50.0;
        const ElectronChannel e_u(spec);
        const DensityMatrix rho0 = DensityMatrix::pure({0.0, 1.0, -1.0, 0.0});
        for (int i = 0; i < 50; ++i) {
            const double t = 60.0 * i / 49.0;
            const DensityMatrix rho_u = e_u.apply(rho0, t);
            const double s = singlet_expectation(rho_u);
            const double direct =
                singlet_expectation(infinite_temperature_pair(rho_u, t, spec.t1_ns, spec.t2_ns));
            worst = std::max(worst, std::abs(direct - relaxed_closed_form(s, t, spec.t1_ns, spec.t2_ns)));
        }
    }
    // tmp: hyperfine couplings, equal pair times
    for (double field : {0.0, 100.0}) {
        SpinSystemSpec spec;
        spec.field_mT = field;
        spec.hfc = {{1, 1.0, 1.8}, {1, 0.5, -1.87}};
        spec.t1_ns = kVerifyTmpTau;
        spec.t2_ns = kVerifyTmpTau;
        const ElectronChannel e_u(spec);
        const DensityMatrix rho0 = DensityMatrix::pure({0.0, 1.0, -1.0, 0.0});
        for (int i = 0; i < 50; ++i) {
            const double t = 100.0 * i / 49.0;
            const DensityMatrix rho_u = e_u.apply(rho0, t);
            const double s = singlet_expectation(rho_u);
            const double direct =
                singlet_expectation(infinite_temperature_pair(rho_u, t, spec.t1_ns, spec.t2_ns));
            worst = std::max(worst, std::abs(direct - relaxed_closed_form(s, t, spec.t1_ns, spec.t2_ns)));
        }
    }
    return {"relaxed_closed_form_pipeline",
            "two-qubit infinite-temperature channel against the closed form, both systems", worst,
            1e-10, false, worst < 1e-10};
}

VerifyCheck check_method_agreement() {
    // kraus, corrected inherent and double correction against the closed form
    SpinSystemSpec spec;
    spec.g1 = 2.0028;
    spec.g2 = 2.0082;
    spec.field_mT = 17.0;
    spec.t1_ns = 50.0;
    spec.t2_ns = 50.0;
    NoiseModel qubit;
    qubit.t1_ns = 30000.0;
    qubit.t2_ns = 30000.0;
    qubit.t_id_ns = 35.0;
    double worst = 0.0;
    for (int i = 0; i < 25; ++i) {
        const double t = 60.0 * i / 24.0;
        const double s = analytic_two_g(spec, t);
        const double oracle = relaxed_closed_form(s, t, spec.t1_ns, spec.t2_ns);
        worst = std::max(worst,
                         std::abs(kraus_method(s, t, spec.t1_ns, spec.t2_ns, 0, 0).s_estimate - oracle));
        const InherentResult inh = inherent_method(spec, t, qubit, 4, 0, 0);
        worst = std::max(worst, std::abs(inh.s_corrected - oracle));
        const InherentResult corr = inherent_correction(spec, t, qubit, 4, 0, 0);
        const double doubled = double_correction(
            inh.pops, corr.pops, kraus_correction(t, spec.t1_ns, spec.t2_ns, 0, 0).pops);
        worst = std::max(worst, std::abs(doubled - oracle));
    }
    return {"three_way_method_agreement",
            "kraus, corrected inherent and double correction against the closed form", worst, 1e-8,
            false, worst < 1e-8};
}

VerifyCheck check_evolved_state_structure() {
    SpinSystemSpec spec;
    spec.field_mT = 100.0;
    spec.hfc = {{1, 1.0, 1.8}, {1, 0.5, -1.87}};
    spec.t1_ns = kVerifyTmpTau;
    spec.t2_ns = kVerifyTmpTau;
    const ElectronChannel e_u(spec);
    const DensityMatrix rho0 = DensityMatrix::pure({0.0, 1.0, -1.0, 0.0});
    double worst = 0.0;
    for (double t : {4.0, 19.0, 47.0}) {
        const DensityMatrix rho_u = e_u.apply(rho0, t);
        worst = std::max(worst, std::abs(rho_u.mat(0, 0) - rho_u.mat(3, 3)));
        worst = std::max(worst, std::abs(rho_u.mat(1, 1) - rho_u.mat(2, 2)));
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                const bool structural = (i == j) || (i == 1 && j == 2) || (i == 2 && j == 1);
                if (!structural) worst = std::max(worst, std::abs(rho_u.mat(i, j)));
            }
    }
    return {"evolved_state_block_structure",
            "equal corner populations, equal mid-block populations, zeros elsewhere", worst, 1e-10,
            false, worst < 1e-10};
}

VerifyCheck check_correction_roundtrip(std::uint64_t seed) {
    Rng64 rng(seed);
    double worst = 0.0;
    int tested = 0;
    while (tested < 1000) {
        auto draw = [&rng] {
            const double a = rng.uniform(), b = rng.uniform(), c = rng.uniform();
            const double norm = a + b + 2.0 * c;
            return Populations{a / norm, b / norm, c / norm, c / norm};
        };
        const Populations run = draw();
        const Populations corr = draw();
        if (std::abs(1.0 - 4.0 * corr.t_plus) < 1e-3 || std::abs(corr.singlet - corr.t0) < 1e-3)
            continue;
        const Populations damped = correction_apply(run, corr);
        const Populations back = correction_undo(damped, corr);
        worst = std::max({worst, std::abs(back.singlet - run.singlet), std::abs(back.t0 - run.t0),
                          std::abs(back.t_plus - run.t_plus)});
        ++tested;
    }
    return {"correction_roundtrip", "combine-then-undo on 1000 random population pairs", worst,
            1e-10, false, worst < 1e-10};
}

}  // namespace

std::vector<VerifyCheck> run_verify_suite(std::uint64_t seed) {
    std::vector<VerifyCheck> checks;
    checks.push_back(check_completeness(mix_seed(seed, 1)));
    checks.push_back(check_xz_commutation(mix_seed(seed, 2)));
    checks.push_back(check_decay_condition(mix_seed(seed, 3)));
    checks.push_back(check_pz_sign_sensitivity(mix_seed(seed, 4)));
    checks.push_back(check_evolution_commutation(mix_seed(seed, 5)));
    checks.push_back(check_zero_temperature_noncommutation(mix_seed(seed, 6)));
    checks.push_back(check_closed_form_pipeline());
    checks.push_back(check_method_agreement());
    checks.push_back(check_evolved_state_structure());
    checks.push_back(check_correction_roundtrip(mix_seed(seed, 7)));
    return checks;
}

std::string verify_report_json(const std::vector<VerifyCheck>& checks) {
    nlohmann::json doc;
    doc["suite"] = "spinbeats-verify";
    doc["rng"] = kRngAlgorithm;
    bool all = true;
    for (const auto& c : checks) {
        nlohmann::json item;
        item["name"] = c.name;
        item["detail"] = c.detail;
        item["deviation"] = c.deviation;
        item["threshold"] = c.threshold;
        item["comparison"] = c.require_above ? "deviation_must_exceed" : "deviation_must_stay_below";
        item["pass"] = c.passed;
        doc["checks"].push_back(item);
        all = all && c.passed;
    }
    doc["all_passed"] = all;
    return doc.dump(2) + "\n";
}

}  // namespace spinbeats
