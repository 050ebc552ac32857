#include "spinbeats/spin_system.hpp"

#include <cmath>

#include "spinbeats/hermitian_eig.hpp"

namespace spinbeats {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

bool is_supported_spin(double s) {
    return std::abs(s - 0.5) < 1e-12 || std::abs(s - 1.0) < 1e-12;
}

}  // namespace

std::size_t SpinSystemSpec::nuclear_dim() const {
    std::size_t n = 1;
    for (const auto& h : hfc) n *= static_cast<std::size_t>(std::lround(2.0 * h.nuclear_spin + 1.0));
    return n;
}

void SpinSystemSpec::validate() const {
    if (std::isfinite(t1_ns) && t1_ns <= 0.0) throw std::invalid_argument("spec: T1 must be positive");
    if (std::isfinite(t2_ns) && t2_ns <= 0.0) throw std::invalid_argument("spec: T2 must be positive");
    if (std::isfinite(t1_ns) && std::isfinite(t2_ns) && t2_ns > 2.0 * t1_ns * (1.0 + 1e-12))
        throw std::invalid_argument("spec: T2 > 2*T1 is unphysical");
    if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("spec: theta outside [0,1]");
    if (sigma_rad_per_ns < 0.0) throw std::invalid_argument("spec: sigma must be >= 0");
    for (const auto& h : hfc) {
        if (h.electron != 1 && h.electron != 2)
            throw std::invalid_argument("spec: hyperfine electron index must be 1 or 2");
        if (!is_supported_spin(h.nuclear_spin))
            throw std::invalid_argument("spec: nuclear spin must be 1/2 or 1");
    }
}

SpinOperators spin_operators(double s) {
    if (!is_supported_spin(s)) throw std::invalid_argument("spin_operators: spin must be 1/2 or 1");
    if (std::abs(s - 0.5) < 1e-12) {
        SpinOperators ops;
        ops.sx = ComplexMatrix{{0.0, 0.5}, {0.5, 0.0}};
        ops.sy = ComplexMatrix{{0.0, cplx(0.0, -0.5)}, {cplx(0.0, 0.5), 0.0}};
        ops.sz = ComplexMatrix{{0.5, 0.0}, {0.0, -0.5}};
        return ops;
    }
    SpinOperators ops;
    ops.sx = ComplexMatrix{{0.0, kInvSqrt2, 0.0}, {kInvSqrt2, 0.0, kInvSqrt2}, {0.0, kInvSqrt2, 0.0}};
    ops.sy = ComplexMatrix{{0.0, cplx(0.0, -kInvSqrt2), 0.0},
                           {cplx(0.0, kInvSqrt2), 0.0, cplx(0.0, -kInvSqrt2)},
                           {0.0, cplx(0.0, kInvSqrt2), 0.0}};
    ops.sz = ComplexMatrix{{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, -1.0}};
    return ops;
}

ComplexMatrix build_hamiltonian(const SpinSystemSpec& spec) {
    spec.validate();
    const SpinOperators e = spin_operators(0.5);
    const std::size_t n_nuc = spec.hfc.size();

    std::vector<std::size_t> dims{2, 2};
    for (const auto& h : spec.hfc)
        dims.push_back(static_cast<std::size_t>(std::lround(2.0 * h.nuclear_spin + 1.0)));

    auto lift = [&](const ComplexMatrix& op, std::size_t slot) {
        std::vector<ComplexMatrix> factors;
        factors.reserve(dims.size());
        for (std::size_t i = 0; i < dims.size(); ++i)
            factors.push_back(i == slot ? op : ComplexMatrix::identity(dims[i]));
        return kron_all(factors);
    };

    const std::size_t dim = spec.hilbert_dim();
    ComplexMatrix h(dim, dim);

    // Zeeman terms, field along z
    const double w1 = kGammaRadPerNsPerMT * spec.g1 * spec.field_mT;
    const double w2 = kGammaRadPerNsPerMT * spec.g2 * spec.field_mT;
    h += cplx(w1, 0.0) * lift(e.sz, 0);
    h += cplx(w2, 0.0) * lift(e.sz, 1);

    // Hyperfine terms a I.S
    for (std::size_t j = 0; j < n_nuc; ++j) {
        const auto& hf = spec.hfc[j];
        const double a = kGammaRadPerNsPerMT * kGFree * hf.a_mT;
        const std::size_t eslot = (hf.electron == 1) ? 0 : 1;
        const SpinOperators nuc = spin_operators(hf.nuclear_spin);
        h += cplx(a, 0.0) * (lift(e.sx, eslot) * lift(nuc.sx, 2 + j));
        h += cplx(a, 0.0) * (lift(e.sy, eslot) * lift(nuc.sy, 2 + j));
        h += cplx(a, 0.0) * (lift(e.sz, eslot) * lift(nuc.sz, 2 + j));
    }
    return h;
}

std::vector<cplx> singlet_ket() { return {0.0, kInvSqrt2, -kInvSqrt2, 0.0}; }
std::vector<cplx> triplet0_ket() { return {0.0, kInvSqrt2, kInvSqrt2, 0.0}; }

DensityMatrix initial_state(const SpinSystemSpec& spec) {
    // |S><S| with exact half entries
    ComplexMatrix proj(4, 4);
    proj(1, 1) = 0.5;
    proj(2, 2) = 0.5;
    proj(1, 2) = -0.5;
    proj(2, 1) = -0.5;
    const std::size_t n = spec.nuclear_dim();
    ComplexMatrix nuc = ComplexMatrix::identity(n);
    nuc *= cplx(1.0 / static_cast<double>(n), 0.0);
    return DensityMatrix(kron(proj, nuc));
}

SpinEvolution::SpinEvolution(const SpinSystemSpec& spec)
    : spec_(spec), eig_(eig_hermitian(build_hamiltonian(spec))), rho0_(initial_state(spec)) {
    subsystem_dims_ = {4};
    for (const auto& h : spec_.hfc)
        subsystem_dims_.push_back(static_cast<std::size_t>(std::lround(2.0 * h.nuclear_spin + 1.0)));
}

DensityMatrix SpinEvolution::electron_state(double t_ns) const {
    std::vector<cplx> phases(eig_.values.size());
    for (std::size_t j = 0; j < phases.size(); ++j)
        phases[j] = std::exp(cplx(0.0, -eig_.values[j] * t_ns));
    const ComplexMatrix u = hermitian_apply(eig_, phases);
    DensityMatrix evolved(u * rho0_.mat * u.adjoint());
    if (subsystem_dims_.size() == 1) return evolved;
    return partial_trace(evolved, subsystem_dims_, {0});
}

double SpinEvolution::singlet_probability(double t_ns) const {
    const DensityMatrix rho_e = electron_state(t_ns);
    const auto s = singlet_ket();
    cplx val = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) val += std::conj(s[i]) * rho_e.mat(i, j) * s[j];
    return val.real();
}

SpinEvolution::BasisPopulations SpinEvolution::populations(double t_ns) const {
    const DensityMatrix rho_e = electron_state(t_ns);
    auto expect = [&](const std::vector<cplx>& ket) {
        cplx val = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) val += std::conj(ket[i]) * rho_e.mat(i, j) * ket[j];
        return val.real();
    };
    BasisPopulations p;
    p.singlet = expect(singlet_ket());
    p.t0 = expect(triplet0_ket());
    p.t_plus = rho_e.mat(0, 0).real();
    p.t_minus = rho_e.mat(3, 3).real();
    return p;
}

double singlet_probability(const SpinSystemSpec& spec, double t_ns) {
    return SpinEvolution(spec).singlet_probability(t_ns);
}

double analytic_two_g(const SpinSystemSpec& spec, double t_ns) {
    if (!spec.hfc.empty())
        throw std::invalid_argument("analytic_two_g: closed form requires a spec with no hyperfine couplings");
    const double d_omega = kGammaRadPerNsPerMT * (spec.g1 - spec.g2) * spec.field_mT;
    const double c = std::cos(0.5 * d_omega * t_ns);
    return c * c;
}

double second_moment(const std::vector<HyperfineCoupling>& hfc) {
    double acc = 0.0;
    for (const auto& h : hfc) acc += h.a_mT * h.a_mT * h.nuclear_spin * (h.nuclear_spin + 1.0);
    return kGammaRadPerNsPerMT * std::sqrt(acc / 3.0);
}

}  // namespace spinbeats
