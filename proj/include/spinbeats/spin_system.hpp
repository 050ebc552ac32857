// Radical-pair spin systems: Hamiltonian construction (field along z, ordering
// electron1 x electron2 x nuclei in spec order), the singlet initial state,
// and the exact singlet probability with its analytic special case.
//
// Units: hbar = 1, times in ns, fields and hyperfine constants in mT.
// Conversion mT -> rad/ns uses gamma = mu_B/hbar = 8.794e-2 rad ns^-1 mT^-1,
// with the supplied g-factors on the Zeeman terms and the free-electron
// g = 2.0023 on the hyperfine terms.
#pragma once

#include <optional>
#include <vector>

#include "spinbeats/density_matrix.hpp"
#include "spinbeats/hermitian_eig.hpp"

namespace spinbeats {

inline constexpr double kGammaRadPerNsPerMT = 8.794e-2;
inline constexpr double kGFree = 2.0023;

struct HyperfineCoupling {
    int electron = 1;      // 1 or 2
    double nuclear_spin = 0.5;  // 1/2 or 1
    double a_mT = 0.0;     // coupling constant
};

struct SpinSystemSpec {
    double g1 = kGFree;
    double g2 = kGFree;
    double field_mT = 0.0;
    std::vector<HyperfineCoupling> hfc;
    double t1_ns = std::numeric_limits<double>::infinity();  // pair-effective T1
    double t2_ns = std::numeric_limits<double>::infinity();  // pair-effective T2
    double theta = 0.0;                                      // recombining same-precursor fraction
    double sigma_rad_per_ns = 0.0;  // semiclassical Gaussian dephasing second moment

    std::size_t nuclear_dim() const;
    std::size_t hilbert_dim() const { return 4 * nuclear_dim(); }
    void validate() const;  // throws on unphysical values
};

// Angular momentum matrices of dimension 2s+1 for s in {1/2, 1}.
struct SpinOperators {
    ComplexMatrix sx, sy, sz;
};
SpinOperators spin_operators(double s);

// H in rad/ns on the electron1 x electron2 x nuclei space.
ComplexMatrix build_hamiltonian(const SpinSystemSpec& spec);

// rho(0) = |S><S| (x) I/N_I.
DensityMatrix initial_state(const SpinSystemSpec& spec);

// |S>, |T0>, |T+>, |T-> as 4-dim electron-space kets.
std::vector<cplx> singlet_ket();
std::vector<cplx> triplet0_ket();

// Precomputed eigensystem of one spin system, reused across a time grid.
class SpinEvolution {
public:
    explicit SpinEvolution(const SpinSystemSpec& spec);

    // Reduced electron density matrix at time t (nuclei traced out).
    DensityMatrix electron_state(double t_ns) const;

    // <S| rho_e(t) |S>.
    double singlet_probability(double t_ns) const;

    struct BasisPopulations {
        double singlet, t0, t_plus, t_minus;
    };
    BasisPopulations populations(double t_ns) const;

    const SpinSystemSpec& spec() const { return spec_; }

private:
    SpinSystemSpec spec_;
    EigenSystem eig_;
    DensityMatrix rho0_;
    std::vector<std::size_t> subsystem_dims_;
};

// One-shot convenience wrapper around SpinEvolution.
double singlet_probability(const SpinSystemSpec& spec, double t_ns);

// Closed form for pairs with no hyperfine couplings:
// cos^2(dOmega t / 2) with dOmega = gamma (g1 - g2) B. Rejects specs with HFC.
double analytic_two_g(const SpinSystemSpec& spec, double t_ns);

// Second moment of the semiclassical hyperfine distribution,
// sigma = sqrt(1/3 sum a_n^2 I_n (I_n + 1)), returned in rad/ns.
double second_moment(const std::vector<HyperfineCoupling>& hfc);

}  // namespace spinbeats
