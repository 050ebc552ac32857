#include "doctest.h"

#include <cmath>

#include "spinbeats/experiments.hpp"
#include "spinbeats/spin_system.hpp"

using namespace spinbeats;

namespace {

SpinSystemSpec dps_low() {
    SpinSystemSpec s;
    s.g1 = 2.0028;
    s.g2 = 2.0082;
    s.field_mT = 17.0;
    s.t1_ns = 50.0;
    s.t2_ns = 50.0;
    s.theta = 0.425;
    return s;
}

SpinSystemSpec tmp_spec(double field_mT) {
    SpinSystemSpec s;
    s.field_mT = field_mT;
    s.hfc = {{1, 1.0, 1.8}, {1, 0.5, -1.87}};
    s.t1_ns = 10.0;
    s.t2_ns = 10.0;
    s.theta = 0.108;
    return s;
}

// Taylor-series matrix exponential of -i H dt; independent of the Jacobi
// path used by the library.
ComplexMatrix expm_taylor(const ComplexMatrix& h, double dt) {
    const std::size_t n = h.rows();
    ComplexMatrix term = ComplexMatrix::identity(n);
    ComplexMatrix sum = term;
    for (int k = 1; k < 40; ++k) {
        term = term * h;
        term *= cplx(0.0, -dt) * cplx(1.0 / k, 0.0);
        sum += term;
        if (term.max_abs() < 1e-18) break;
    }
    return sum;
}

// Strang-split Trotter oracle for S(t): exponentiates the two hyperfine
// terms separately, never calling the eigensolver.
double trotter_singlet_probability(const SpinSystemSpec& spec, double t, int steps) {
    const SpinOperators e = spin_operators(0.5);
    const SpinOperators nN = spin_operators(spec.hfc.at(0).nuclear_spin);
    const SpinOperators nH = spin_operators(spec.hfc.at(1).nuclear_spin);
    const std::size_t dN = nN.sz.rows(), dH = nH.sz.rows();
    auto lift4 = [&](const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                     const ComplexMatrix& d) { return kron(kron(kron(a, b), c), d); };
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    const ComplexMatrix iN = ComplexMatrix::identity(dN);
    const ComplexMatrix iH = ComplexMatrix::identity(dH);

    const double aN = kGammaRadPerNsPerMT * kGFree * spec.hfc.at(0).a_mT;
    const double aH = kGammaRadPerNsPerMT * kGFree * spec.hfc.at(1).a_mT;
    const double w1 = kGammaRadPerNsPerMT * spec.g1 * spec.field_mT;
    const double w2 = kGammaRadPerNsPerMT * spec.g2 * spec.field_mT;

    ComplexMatrix ha = lift4(e.sx, i2, nN.sx, iH) * cplx(aN, 0.0) +
                       lift4(e.sy, i2, nN.sy, iH) * cplx(aN, 0.0) +
                       lift4(e.sz, i2, nN.sz, iH) * cplx(aN, 0.0);
    ha += lift4(e.sz, i2, iN, iH) * cplx(w1, 0.0) + lift4(i2, e.sz, iN, iH) * cplx(w2, 0.0);
    const ComplexMatrix hb = lift4(e.sx, i2, iN, nH.sx) * cplx(aH, 0.0) +
                             lift4(e.sy, i2, iN, nH.sy) * cplx(aH, 0.0) +
                             lift4(e.sz, i2, iN, nH.sz) * cplx(aH, 0.0);

    const double dt = t / steps;
    const ComplexMatrix ua_half = expm_taylor(ha, 0.5 * dt);
    const ComplexMatrix ub = expm_taylor(hb, dt);
    ComplexMatrix u = ComplexMatrix::identity(ha.rows());
    const ComplexMatrix step = ua_half * ub * ua_half;
    for (int k = 0; k < steps; ++k) u = step * u;

    const DensityMatrix rho0 = initial_state(spec);
    DensityMatrix evolved(u * rho0.mat * u.adjoint());
    const DensityMatrix rho_e = partial_trace(evolved, {4, dN, dH}, {0});
    const auto s = singlet_ket();
    cplx val = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) val += std::conj(s[i]) * rho_e.mat(i, j) * s[j];
    return val.real();
}

}  // namespace

TEST_CASE("spin operators") {
    SUBCASE("spin 1/2 is Pauli over two") {
        const SpinOperators ops = spin_operators(0.5);
        CHECK(ops.sz.max_abs_diff(ComplexMatrix::diag({0.5, -0.5})) == 0.0);
        // [Sx, Sy] = i Sz
        const ComplexMatrix comm = ops.sx * ops.sy - ops.sy * ops.sx;
        CHECK(comm.max_abs_diff(ops.sz * cplx(0.0, 1.0)) < 1e-15);
    }

    SUBCASE("spin 1 Casimir and commutator") {
        const SpinOperators ops = spin_operators(1.0);
        CHECK(ops.sz.max_abs_diff(ComplexMatrix::diag({1.0, 0.0, -1.0})) == 0.0);
        const ComplexMatrix casimir = ops.sx * ops.sx + ops.sy * ops.sy + ops.sz * ops.sz;
        ComplexMatrix two_i3 = ComplexMatrix::identity(3);
        two_i3 *= cplx(2.0, 0.0);
        CHECK(casimir.max_abs_diff(two_i3) < 1e-14);
        const ComplexMatrix comm = ops.sx * ops.sy - ops.sy * ops.sx;
        CHECK(comm.max_abs_diff(ops.sz * cplx(0.0, 1.0)) < 1e-14);
    }

    SUBCASE("unsupported spins rejected") {
        CHECK_THROWS_AS(spin_operators(1.5), std::invalid_argument);
    }
}

TEST_CASE("build_hamiltonian") {
    SUBCASE("two-g pair is the diagonal Zeeman sum") {
        const SpinSystemSpec spec = dps_low();
        const ComplexMatrix h = build_hamiltonian(spec);
        REQUIRE(h.rows() == 4);
        const double w1 = kGammaRadPerNsPerMT * spec.g1 * spec.field_mT;
        const double w2 = kGammaRadPerNsPerMT * spec.g2 * spec.field_mT;
        const SpinOperators e = spin_operators(0.5);
        const ComplexMatrix expected = kron(e.sz, ComplexMatrix::identity(2)) * cplx(w1, 0.0) +
                                       kron(ComplexMatrix::identity(2), e.sz) * cplx(w2, 0.0);
        CHECK(h.max_abs_diff(expected) < 1e-14);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                if (i != j) CHECK(std::abs(h(i, j)) == 0.0);
    }

    SUBCASE("tmp pair has dim 24 and is Hermitian") {
        const ComplexMatrix h = build_hamiltonian(tmp_spec(100.0));
        CHECK(h.rows() == 24);
        CHECK(h.hermiticity_defect() == 0.0);
    }

    SUBCASE("no field and no couplings gives the zero matrix") {
        SpinSystemSpec empty;
        CHECK(build_hamiltonian(empty).max_abs() == 0.0);
    }
}

TEST_CASE("initial state") {
    SUBCASE("no nuclei: pure singlet projector") {
        SpinSystemSpec spec;
        const DensityMatrix rho = initial_state(spec);
        REQUIRE(rho.dim() == 4);
        CHECK(rho.mat(1, 1).real() == doctest::Approx(0.5));
        CHECK(rho.mat(2, 2).real() == doctest::Approx(0.5));
        CHECK(rho.mat(1, 2).real() == doctest::Approx(-0.5));
        CHECK(std::abs(rho.mat(0, 0)) == 0.0);
        CHECK(std::abs(rho.mat.trace() - cplx(1.0, 0.0)) < 1e-15);
        rho.validate();
    }

    SUBCASE("tmp: reduced states are singlet and maximally mixed") {
        const SpinSystemSpec spec = tmp_spec(0.0);
        const DensityMatrix rho = initial_state(spec);
        REQUIRE(rho.dim() == 24);
        CHECK(std::abs(rho.mat.trace() - cplx(1.0, 0.0)) < 1e-14);
        const DensityMatrix electron = partial_trace(rho, {4, 3, 2}, {0});
        const DensityMatrix no_nuclei = initial_state(SpinSystemSpec{});
        CHECK(electron.mat.max_abs_diff(no_nuclei.mat) < 1e-14);
        const DensityMatrix nuclei = partial_trace(rho, {4, 3, 2}, {1, 2});
        CHECK(nuclei.mat.max_abs_diff(DensityMatrix::maximally_mixed(6).mat) == 0.0);
    }
}

TEST_CASE("singlet probability") {
    SUBCASE("starts at 1") {
        CHECK(singlet_probability(dps_low(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(singlet_probability(tmp_spec(0.0), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("high-field two-g pair matches the cosine closed form") {
        SpinSystemSpec spec = dps_low();
        spec.field_mT = 960.0;
        const SpinEvolution evo(spec);
        for (int i = 0; i <= 100; ++i) {
            const double t = i;
            CHECK(std::abs(evo.singlet_probability(t) - analytic_two_g(spec, t)) < 1e-10);
        }
    }

    SUBCASE("tmp at zero field matches the Trotter oracle to 1e-6") {
        const SpinSystemSpec spec = tmp_spec(0.0);
        const SpinEvolution evo(spec);
        for (double t : {5.0, 20.0, 50.0}) {
            const double oracle = trotter_singlet_probability(spec, t, 10000);
            CHECK(std::abs(evo.singlet_probability(t) - oracle) < 1e-6);
        }
    }

    SUBCASE("values stay within [0,1]") {
        const SpinEvolution evo(tmp_spec(100.0));
        for (int i = 0; i <= 50; ++i) {
            const double s = evo.singlet_probability(2.0 * i);
            CHECK(s >= -1e-12);
            CHECK(s <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("analytic_two_g") {
    SpinSystemSpec spec = dps_low();
    CHECK(analytic_two_g(spec, 0.0) == 1.0);

    // full singlet-triplet conversion when d_omega t = pi
    const double d_omega = kGammaRadPerNsPerMT * (spec.g1 - spec.g2) * spec.field_mT;
    CHECK(analytic_two_g(spec, M_PI / std::abs(d_omega)) == doctest::Approx(0.0).epsilon(1e-12));

    SpinSystemSpec equal_g = spec;
    equal_g.g2 = equal_g.g1;
    for (double t : {1.0, 13.0, 57.0}) CHECK(analytic_two_g(equal_g, t) == 1.0);

    SpinSystemSpec with_hfc = tmp_spec(0.0);
    CHECK_THROWS_AS(analytic_two_g(with_hfc, 1.0), std::invalid_argument);
}

TEST_CASE("energy conservation under the exact evolution") {
    const SpinSystemSpec spec = tmp_spec(100.0);
    const ComplexMatrix h = build_hamiltonian(spec);
    const DensityMatrix rho0 = initial_state(spec);
    const double e0 = (h * rho0.mat).trace().real();
    for (double t : {3.0, 17.0, 42.0}) {
        const ComplexMatrix u = hermitian_evolve(h, t);
        const ComplexMatrix rho_t = u * rho0.mat * u.adjoint();
        CHECK(std::abs((h * rho_t).trace().real() - e0) < 1e-10);
    }
}

TEST_CASE("populations close and respect the pair symmetries") {
    SUBCASE("no-HFC pair never leaves the S/T0 block") {
        SpinSystemSpec spec = dps_low();
        const SpinEvolution evo(spec);
        for (int i = 0; i <= 60; i += 5) {
            const auto p = evo.populations(static_cast<double>(i));
            CHECK(std::abs(p.singlet + p.t0 + p.t_plus + p.t_minus - 1.0) < 1e-10);
            CHECK(std::abs(p.t_plus) < 1e-12);
            CHECK(std::abs(p.t_minus) < 1e-12);
        }
    }

    SUBCASE("tmp populates T+ and T- equally") {
        const SpinEvolution evo(tmp_spec(0.0));
        for (int i = 1; i <= 10; ++i) {
            const auto p = evo.populations(7.0 * i);
            CHECK(std::abs(p.singlet + p.t0 + p.t_plus + p.t_minus - 1.0) < 1e-10);
            CHECK(std::abs(p.t_plus - p.t_minus) < 1e-10);
            CHECK(p.t_plus > 1e-4);  // transitions really happen
        }
    }
}

TEST_CASE("second moment of the hyperfine distribution") {
    CHECK(second_moment({}) == 0.0);

    // single a = 2 mT, I = 1/2: (1/3) * 4 * (3/4) = 1 mT-equivalent
    const double sigma = second_moment({{1, 0.5, 2.0}});
    CHECK(sigma == doctest::Approx(kGammaRadPerNsPerMT).epsilon(1e-14));

    // homogeneity under a -> c a
    const std::vector<HyperfineCoupling> base = {{1, 0.5, 1.1}, {2, 1.0, -0.7}};
    std::vector<HyperfineCoupling> scaled = base;
    for (auto& h : scaled) h.a_mT *= 3.0;
    CHECK(second_moment(scaled) == doctest::Approx(3.0 * second_moment(base)).epsilon(1e-14));
}

TEST_CASE("spec validation") {
    SpinSystemSpec bad = dps_low();
    bad.t2_ns = 150.0;  // T2 > 2 T1
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    SpinSystemSpec bad_spin = dps_low();
    bad_spin.hfc = {{1, 0.75, 1.0}};
    CHECK_THROWS_AS(bad_spin.validate(), std::invalid_argument);

    SpinSystemSpec boundary = dps_low();
    boundary.t1_ns = 25.0;
    boundary.t2_ns = 50.0;  // exactly 2 T1 is allowed
    CHECK_NOTHROW(boundary.validate());
}
