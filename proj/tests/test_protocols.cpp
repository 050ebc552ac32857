#include "doctest.h"

#include <cmath>

#include "spinbeats/protocols.hpp"
#include "spinbeats/rng.hpp"
#include "test_helpers.hpp"

using namespace spinbeats;
using namespace spinbeats::testing;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

NoiseModel backend_qubit(double t1 = 30000.0, double t2 = 30000.0, double t_id = 35.0) {
    NoiseModel n;
    n.t1_ns = t1;
    n.t2_ns = t2;
    n.t_id_ns = t_id;
    return n;
}

Populations random_populations(Rng64& rng) {
    // symmetric in T+/T-, as every protocol here guarantees
    const double a = rng.uniform(), b = rng.uniform(), c = rng.uniform();
    const double norm = a + b + 2.0 * c;
    return {a / norm, b / norm, c / norm, c / norm};
}

}  // namespace

TEST_CASE("encoding circuits") {
    SUBCASE("singlet preparation followed by the measurement map hits |11>") {
        Circuit c = singlet_prep();
        for (const auto& g : bell_measure_map()) c.push_back(g);
        const DensityMatrix rho = run_density(c, 2);
        CHECK(rho.mat(3, 3).real() == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("encode_singlet_t0 stores S as the |11> probability") {
        for (double s : {0.0, 0.25, 0.5, 0.77, 1.0}) {
            Circuit c = encode_singlet_t0(s);
            for (const auto& g : bell_measure_map()) c.push_back(g);
            const DensityMatrix rho = run_density(c, 2);
            CHECK(rho.mat(3, 3).real() == doctest::Approx(s).epsilon(1e-12));
        }
    }

    SUBCASE("the encoded state is a balanced S/T0 superposition") {
        const double s = 0.3;
        const DensityMatrix rho = run_density(encode_singlet_t0(s), 2);
        const auto sk = singlet_ket();
        const auto tk = triplet0_ket();
        std::vector<cplx> psi(4);
        for (std::size_t i = 0; i < 4; ++i)
            psi[i] = std::sqrt(s) * sk[i] - cplx(0.0, 1.0) * std::sqrt(1.0 - s) * tk[i];
        const DensityMatrix expected = DensityMatrix::pure(psi);
        CHECK(rho.mat.max_abs_diff(expected.mat) < 1e-12);
        // the |01> and |10> populations stay equal, unlike the zero-phase variant
        CHECK(std::abs(rho.mat(1, 1) - rho.mat(2, 2)) < 1e-14);
    }

    SUBCASE("out-of-range S rejected") {
        CHECK_THROWS_AS(encode_singlet_t0(1.2), std::invalid_argument);
    }
}

TEST_CASE("kraus method, exact mode") {
    SUBCASE("no relaxation returns the input") {
        for (double s : {0.0, 0.4, 1.0})
            CHECK(kraus_method(s, 25.0, kInf, kInf, 0, 0).s_estimate ==
                  doctest::Approx(s).epsilon(1e-12));
    }

    SUBCASE("fully mixed coherence-free value is a fixed point of dephasing") {
        const MethodResult r = kraus_method(0.5, 40.0, kInf, 35.0, 0, 0);
        CHECK(r.s_estimate == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("matches the relaxed closed form on a 50-point grid") {
        for (auto [t1, t2] : {std::pair{50.0, 50.0}, {80.0, 30.0}, {kInf, 20.0}}) {
            for (int i = 0; i < 50; ++i) {
                const double t = 60.0 * i / 49.0;
                const double s = 0.5 * (1.0 + std::cos(0.21 * t));  // arbitrary smooth S(t)
                const MethodResult r = kraus_method(s, t, t1, t2, 0, 0);
                CHECK(std::abs(r.s_estimate - relaxed_closed_form(s, t, t1, t2)) < 1e-10);
                CHECK(std::abs(r.pops.sum() - 1.0) < 1e-10);
            }
        }
    }

    SUBCASE("gaussian dephasing variant matches the gaussian closed form") {
        const double sigma = 0.05;
        for (int i = 0; i < 25; ++i) {
            const double t = 60.0 * i / 24.0;
            const double s = 0.5 * (1.0 + std::cos(0.4 * t));
            const MethodResult r = kraus_method(s, t, 60.0, 60.0, 0, 0, sigma);
            CHECK(std::abs(r.s_estimate - relaxed_gaussian(s, t, 60.0, 60.0, sigma)) < 1e-10);
        }
    }

    SUBCASE("invalid S rejected") {
        CHECK_THROWS_AS(kraus_method(1.0001, 1.0, 50.0, 50.0, 0, 0), std::invalid_argument);
    }
}

TEST_CASE("kraus method, shot mode") {
    SUBCASE("same seed gives identical estimates") {
        const MethodResult a = kraus_method(0.7, 20.0, 50.0, 50.0, 5000, 42);
        const MethodResult b = kraus_method(0.7, 20.0, 50.0, 50.0, 5000, 42);
        CHECK(a.s_estimate == b.s_estimate);
        CHECK(a.stderr_estimate == b.stderr_estimate);
    }

    SUBCASE("estimates concentrate near the closed form") {
        const double t = 20.0, t1 = 50.0, t2 = 50.0, s = 0.7;
        const double exact = relaxed_closed_form(s, t, t1, t2);
        double acc = 0.0;
        const int reps = 60;
        for (int i = 0; i < reps; ++i)
            acc += kraus_method(s, t, t1, t2, 5000, 1000 + i).s_estimate;
        const double mean = acc / reps;
        CHECK(std::abs(mean - exact) < 4.0 * std::sqrt(0.25 / (5000.0 * reps)) + 1e-3);
    }

    SUBCASE("stderr column reflects the split-branch binomial variance") {
        const MethodResult r = kraus_method(0.6, 30.0, 50.0, 50.0, 5000, 7);
        CHECK(r.stderr_estimate > 0.0);
        CHECK(r.stderr_estimate < 0.02);
    }
}

TEST_CASE("echo deviation") {
    CHECK(echo_deviation(0.0, 50.0, 4) == 0.0);
    CHECK_THROWS_AS(echo_deviation(1.0, 50.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(echo_deviation(1.0, 50.0, 0), std::invalid_argument);

    SUBCASE("decreasing in the echo count, vanishing as n grows") {
        double prev = echo_deviation(60.0, 50.0, 2);
        for (int n : {4, 8, 16, 64, 256}) {
            const double dev = echo_deviation(60.0, 50.0, n);
            CHECK(dev < prev);
            prev = dev;
        }
        CHECK(prev < 1e-8);
    }

    SUBCASE("reference magnitude at the benchmark point") {
        const double dev = echo_deviation(60.0, 50.0, 4);
        CHECK(dev < 3e-5);
        CHECK(dev > 1e-5);
    }
}

TEST_CASE("inherent method, exact mode") {
    SUBCASE("noiseless backend reproduces the isolated dynamics") {
        const SpinSystemSpec spec = dps_spec(17.0);
        NoiseModel ideal;  // infinite T1/T2
        for (double t : {0.0, 10.0, 33.0}) {
            const InherentResult r = inherent_method(spec, t, ideal, 4, 0, 0);
            CHECK(std::abs(r.s_echo - analytic_two_g(spec, t)) < 1e-12);
        }
    }

    SUBCASE("echoed estimate deviates from the closed form exactly as predicted") {
        const SpinSystemSpec spec = dps_spec(17.0, 12.5);  // per-radical time 25 ns
        const NoiseModel qubit = backend_qubit();
        for (int n : {2, 4, 8}) {
            for (int i = 1; i <= 12; ++i) {
                const double t = 5.0 * i;
                const InherentResult r = inherent_method(spec, t, qubit, n, 0, 0);
                const double target =
                    relaxed_closed_form(analytic_two_g(spec, t), t, spec.t1_ns, spec.t2_ns);
                const double dev = echo_deviation(t, spec.t1_ns + spec.t2_ns, n);
                CHECK(std::abs(std::abs(r.s_echo - target) - dev) < 1e-10);
                // the echoed run undershoots; adding the deviation corrects it
                CHECK(std::abs(r.s_corrected - target) < 1e-10);
            }
        }
    }

    SUBCASE("encoded path obeys the same correction") {
        const SpinSystemSpec spec = tmp_spec(0.0, 10.0);
        const NoiseModel qubit = backend_qubit();
        const SpinEvolution evo(spec);
        for (double t : {6.0, 18.0, 36.0}) {
            const double s = evo.singlet_probability(t);
            const InherentResult r = inherent_method(spec, t, qubit, 4, 0, 0, s);
            const double target = relaxed_closed_form(s, t, spec.t1_ns, spec.t2_ns);
            CHECK(std::abs(r.s_corrected - target) < 1e-10);
        }
    }

    SUBCASE("frequency-miscalibration drift is cancelled by the echo train") {
        const SpinSystemSpec spec = dps_spec(17.0, 25.0);
        NoiseModel miscal = backend_qubit();
        NoiseModel clean = backend_qubit();
        miscal.drift_rad_per_ns = 0.002;
        for (double t : {10.0, 30.0, 55.0}) {
            const InherentResult with_drift = inherent_method(spec, t, miscal, 4, 0, 0);
            const InherentResult without = inherent_method(spec, t, clean, 4, 0, 0);
            CHECK(std::abs(with_drift.s_echo - without.s_echo) < 1e-10);
        }
    }

    SUBCASE("odd echo counts rejected") {
        CHECK_THROWS_AS(inherent_method(dps_spec(), 5.0, backend_qubit(), 3, 0, 0),
                        std::invalid_argument);
    }

    SUBCASE("infinite target T1 cannot be reached directly") {
        SpinSystemSpec spec = dps_spec(17.0);
        spec.t1_ns = kInf;
        spec.t2_ns = 20.0;
        CHECK_THROWS_AS(inherent_method(spec, 5.0, backend_qubit(), 4, 0, 0),
                        std::invalid_argument);
    }
}

TEST_CASE("inherent method, shot mode") {
    const SpinSystemSpec spec = dps_spec(17.0, 25.0);
    const NoiseModel qubit = backend_qubit(30000.0, 30000.0, 35.0);

    SUBCASE("identity-gate count is a multiple of twice the echo count") {
        for (int n : {2, 4}) {
            const InherentResult r = inherent_method(spec, 30.0, qubit, n, 2000, 3);
            CHECK(r.n_id_gates > 0);
            CHECK(r.n_id_gates % (2 * n) == 0);
            CHECK(r.t_wall_ns == doctest::Approx(r.n_id_gates * qubit.t_id_ns));
        }
    }

    SUBCASE("deterministic for a fixed seed and near the exact value") {
        const InherentResult a = inherent_method(spec, 30.0, qubit, 4, 5000, 11);
        const InherentResult b = inherent_method(spec, 30.0, qubit, 4, 5000, 11);
        CHECK(a.s_echo == b.s_echo);
        const InherentResult exact = inherent_method(spec, 30.0, qubit, 4, 0, 0);
        CHECK(std::abs(a.s_echo - exact.s_echo) < 5.0 * a.stderr_estimate + 0.01);
    }
}

TEST_CASE("correction circuit algebra") {
    SUBCASE("combining with a pure singlet corrector is the identity on S") {
        const Populations run{0.6, 0.25, 0.075, 0.075};
        CHECK(correction_combine(run, {1.0, 0.0, 0.0, 0.0}) == 0.6);
        CHECK(correction_combine({1, 0, 0, 0}, {1, 0, 0, 0}) == 1.0);
    }

    SUBCASE("the equilibrium corrector collapses every run to 1/4") {
        Rng64 rng(21);
        for (int i = 0; i < 10; ++i) {
            const Populations run = random_populations(rng);
            CHECK(correction_combine(run, {0.25, 0.25, 0.25, 0.25}) ==
                  doctest::Approx(0.25).epsilon(1e-12));
        }
    }

    SUBCASE("undo with a trivial corrector is the identity") {
        const Populations damped{0.55, 0.3, 0.075, 0.075};
        const Populations out = correction_undo(damped, {1.0, 0.0, 0.0, 0.0});
        CHECK(out.singlet == doctest::Approx(0.55).epsilon(1e-14));
        CHECK(out.t0 == doctest::Approx(0.3).epsilon(1e-14));
        CHECK(out.t_plus == doctest::Approx(0.075).epsilon(1e-14));
    }

    SUBCASE("forward then undo recovers the inputs on 1000 random pairs") {
        Rng64 rng(22);
        int tested = 0;
        while (tested < 1000) {
            const Populations run = random_populations(rng);
            const Populations corr = random_populations(rng);
            if (std::abs(1.0 - 4.0 * corr.t_plus) < 1e-3 ||
                std::abs(corr.singlet - corr.t0) < 1e-3)
                continue;  // stay away from the singular set
            const Populations damped = correction_apply(run, corr);
            CHECK(std::abs(damped.sum() - 1.0) < 1e-12);
            const Populations back = correction_undo(damped, corr);
            CHECK(std::abs(back.singlet - run.singlet) < 1e-10);
            CHECK(std::abs(back.t0 - run.t0) < 1e-10);
            CHECK(std::abs(back.t_plus - run.t_plus) < 1e-10);
            ++tested;
        }
    }

    SUBCASE("round trip through undo-then-combine returns the damped S") {
        Rng64 rng(23);
        for (int i = 0; i < 100; ++i) {
            const Populations damped = random_populations(rng);
            Populations corr = random_populations(rng);
            if (std::abs(1.0 - 4.0 * corr.t_plus) < 1e-3 ||
                std::abs(corr.singlet - corr.t0) < 1e-3) {
                --i;
                continue;
            }
            const Populations undone = correction_undo(damped, corr);
            CHECK(std::abs(correction_combine(undone, corr) - damped.singlet) < 1e-10);
        }
    }

    SUBCASE("quarter populations are a fixed point of the T+/T- map") {
        const Populations run{0.25, 0.25, 0.25, 0.25};
        const Populations corr{0.4, 0.3, 0.25, 0.25};  // corrector T+ = 1/4
        const Populations damped = correction_apply(run, corr);
        CHECK(damped.t_plus == doctest::Approx(0.25).epsilon(1e-14));
    }

    SUBCASE("the equilibrium corrector makes the inversion singular") {
        const Populations damped{0.5, 0.3, 0.1, 0.1};
        CHECK_THROWS_AS(correction_undo(damped, {0.25, 0.25, 0.25, 0.25}), std::domain_error);
    }
}

TEST_CASE("double correction") {
    const double tau = 10.0;
    const SpinSystemSpec spec = tmp_spec(100.0, tau);
    const NoiseModel qubit = backend_qubit();
    const SpinEvolution evo(spec);

    SUBCASE("re-applying the identical channel reproduces the corrected inherent result") {
        for (double t : {8.0, 24.0}) {
            const double s = evo.singlet_probability(t);
            const InherentResult run = inherent_method(spec, t, qubit, 4, 0, 0, s);
            const InherentResult corr = inherent_correction(spec, t, qubit, 4, 0, 0);
            const Populations kraus_same = kraus_correction(t, tau, tau, 0, 0).pops;
            const double combined = double_correction(run.pops, corr.pops, kraus_same);
            CHECK(std::abs(combined - run.s_corrected) < 1e-10);
        }
    }

    SUBCASE("an infinite-T1 target reproduces the dephasing-only closed form") {
        for (double t : {5.0, 15.0, 35.0, 60.0}) {
            const double s = evo.singlet_probability(t);
            const InherentResult run = inherent_method(spec, t, qubit, 4, 0, 0, s);
            const InherentResult corr = inherent_correction(spec, t, qubit, 4, 0, 0);
            const Populations kraus_inf = kraus_correction(t, kInf, tau, 0, 0).pops;
            const double combined = double_correction(run.pops, corr.pops, kraus_inf);
            CHECK(std::abs(combined - relaxed_closed_form(s, t, kInf, tau)) < 1e-10);

            // simplified repopulation route: P(S) + P(T-)
            const double simplified = run.pops.singlet + corr.pops.t_minus;
            CHECK(std::abs(simplified - combined) < 1e-10);
        }
    }

    SUBCASE("a pure corrector strips the decoherence entirely") {
        const double t = 12.0;
        const double s = evo.singlet_probability(t);
        const InherentResult run = inherent_method(spec, t, qubit, 4, 0, 0, s);
        const InherentResult corr = inherent_correction(spec, t, qubit, 4, 0, 0);
        const double undone = double_correction(run.pops, corr.pops, {1.0, 0.0, 0.0, 0.0});
        CHECK(std::abs(undone - s) < 1e-10);
    }
}

TEST_CASE("tr_mfe and intensity") {
    SUBCASE("equal fields give unity") {
        CHECK(tr_mfe(0.62, 0.62, 0.425) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(tr_mfe(0.1, 0.9, 0.0) == 1.0);
    }

    SUBCASE("benchmark value") {
        CHECK(tr_mfe(1.0, 0.5, 0.425) == doctest::Approx(2.275 / 1.425).epsilon(1e-15));
    }

    SUBCASE("intensity limits") {
        CHECK(intensity(2.0, 0.77, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(intensity(3.0, 1.0, 1.0) == doctest::Approx(3.0).epsilon(1e-15));
        CHECK(intensity(1.0, 0.5, 0.108) == doctest::Approx(0.277).epsilon(1e-15));
        CHECK_THROWS_AS(intensity(-1.0, 0.5, 0.1), std::invalid_argument);
    }

    SUBCASE("the intensity ratio cancels any F scaling") {
        Rng64 rng(33);
        for (int i = 0; i < 20; ++i) {
            const double f = 1e4 * rng.uniform() + 1.0;
            const double sb = rng.uniform(), s0 = rng.uniform();
            const double theta = rng.uniform();
            const double ratio = intensity(f, sb, theta) / intensity(f, s0, theta);
            CHECK(ratio == doctest::Approx(tr_mfe(sb, s0, theta)).epsilon(1e-12));
        }
    }

    SUBCASE("theta outside the unit interval rejected") {
        CHECK_THROWS_AS(tr_mfe(0.5, 0.5, 1.2), std::invalid_argument);
    }
}

TEST_CASE("three-way method agreement on the closed form") {
    // kraus, corrected inherent and double correction all land on the same
    // curve in exact mode
    const SpinSystemSpec spec = dps_spec(17.0, 25.0);
    const NoiseModel qubit = backend_qubit();
    for (int i = 1; i <= 10; ++i) {
        const double t = 6.0 * i;
        const double s = analytic_two_g(spec, t);
        const double oracle = relaxed_closed_form(s, t, spec.t1_ns, spec.t2_ns);

        const double kraus = kraus_method(s, t, spec.t1_ns, spec.t2_ns, 0, 0).s_estimate;
        const InherentResult inh = inherent_method(spec, t, qubit, 4, 0, 0);
        const InherentResult corr = inherent_correction(spec, t, qubit, 4, 0, 0);
        const double doubled = double_correction(
            inh.pops, corr.pops, kraus_correction(t, spec.t1_ns, spec.t2_ns, 0, 0).pops);

        CHECK(std::abs(kraus - oracle) < 1e-10);
        CHECK(std::abs(inh.s_corrected - oracle) < 1e-10);
        CHECK(std::abs(doubled - oracle) < 1e-10);
    }
}
