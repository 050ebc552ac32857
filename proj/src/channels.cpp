#include "spinbeats/channels.hpp"

#include <cmath>

#include "spinbeats/rng.hpp"

namespace spinbeats {

namespace {

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
}

}  // namespace

double QuantumChannel::completeness_defect() const {
    ComplexMatrix acc(dim, dim);
    for (const auto& k : kraus) acc += k.adjoint() * k;
    return acc.max_abs_diff(ComplexMatrix::identity(dim));
}

void QuantumChannel::validate(double tol) const {
    for (const auto& k : kraus)
        if (k.rows() != dim || k.cols() != dim)
            throw std::runtime_error("QuantumChannel: Kraus dim mismatch in " + label);
    if (completeness_defect() >= tol)
        throw std::runtime_error("QuantumChannel: completeness violated in " + label);
}

QuantumChannel gad_kraus(double p_x, double p_n) {
    check_probability(p_x, "p_x");
    check_probability(p_n, "p_n");
    const double sx = std::sqrt(p_x);
    const double sxb = std::sqrt(1.0 - p_x);
    const double sn = std::sqrt(p_n);
    const double snb = std::sqrt(1.0 - p_n);
    QuantumChannel ch;
    ch.dim = 2;
    ch.label = "gad";
    ch.kraus = {
        ComplexMatrix{{sn, 0.0}, {0.0, sn * sxb}},
        ComplexMatrix{{0.0, sn * sx}, {0.0, 0.0}},
        ComplexMatrix{{snb * sxb, 0.0}, {0.0, snb}},
        ComplexMatrix{{0.0, 0.0}, {snb * sx, 0.0}},
    };
    return ch;
}

QuantumChannel dephasing_kraus(double p_z) {
    if (!(p_z >= 0.0 && p_z <= 0.5))
        throw std::invalid_argument("p_z must lie in [0, 1/2]");
    QuantumChannel ch;
    ch.dim = 2;
    ch.label = "dephasing";
    ch.kraus = {
        ComplexMatrix{{std::sqrt(1.0 - p_z), 0.0}, {0.0, std::sqrt(1.0 - p_z)}},
        ComplexMatrix{{std::sqrt(p_z), 0.0}, {0.0, -std::sqrt(p_z)}},
    };
    return ch;
}

DensityMatrix apply_channel(const QuantumChannel& ch, const DensityMatrix& rho,
                            const std::vector<std::size_t>& targets) {
    const std::size_t expected = std::size_t{1} << targets.size();
    if (ch.dim != expected)
        throw std::invalid_argument("apply_channel: channel dim does not match target count");
    std::size_t nq = 0;
    while ((std::size_t{1} << nq) < rho.dim()) ++nq;
    if ((std::size_t{1} << nq) != rho.dim())
        throw std::invalid_argument("apply_channel: state dim is not a power of two");

    ComplexMatrix out(rho.dim(), rho.dim());
    for (const auto& k : ch.kraus) {
        const ComplexMatrix kb = embed_qubit_op(k, targets, nq);
        out += kb * rho.mat * kb.adjoint();
    }
    return DensityMatrix(std::move(out));
}

DensityMatrix apply_on_each(const QuantumChannel& ch, const DensityMatrix& rho,
                            const std::vector<std::size_t>& qubits) {
    DensityMatrix out = rho;
    for (std::size_t q : qubits) out = apply_channel(ch, out, {q});
    return out;
}

QuantumChannel lift_channel(const QuantumChannel& ch, std::size_t pre_dim, std::size_t post_dim) {
    QuantumChannel out;
    out.dim = pre_dim * ch.dim * post_dim;
    out.label = ch.label + " (lifted)";
    const ComplexMatrix pre = ComplexMatrix::identity(pre_dim);
    const ComplexMatrix post = ComplexMatrix::identity(post_dim);
    for (const auto& k : ch.kraus) out.kraus.push_back(kron(kron(pre, k), post));
    return out;
}

DensityMatrix apply_channel_dense(const QuantumChannel& ch, const DensityMatrix& rho) {
    if (ch.dim != rho.dim())
        throw std::invalid_argument("apply_channel_dense: dimension mismatch");
    ComplexMatrix out(rho.dim(), rho.dim());
    for (const auto& k : ch.kraus) out += k * rho.mat * k.adjoint();
    return DensityMatrix(std::move(out));
}

DecayParams decay_params(double t_ns, double t1_ns, double t2_ns) {
    if (t_ns < 0.0) throw std::invalid_argument("decay_params: t must be >= 0");
    if (t2_ns > 2.0 * t1_ns * (1.0 + 1e-12))
        throw std::invalid_argument("decay_params: T2 > 2*T1 is unphysical");
    DecayParams p;
    p.p_x = 1.0 - std::exp(-t_ns / t1_ns);
    p.p_z = 0.5 * (1.0 - std::exp(t_ns / (2.0 * t1_ns) - t_ns / t2_ns));
    p.p_n = 1.0;
    // guard against roundoff at the T2 = 2 T1 boundary
    if (p.p_z < 0.0 && p.p_z > -1e-15) p.p_z = 0.0;
    return p;
}

DensityMatrix apply_relaxation(const DecayParams& p, const DensityMatrix& rho,
                               const std::vector<std::size_t>& qubits) {
    const QuantumChannel ex = gad_kraus(p.p_x, p.p_n);
    const QuantumChannel ez = dephasing_kraus(p.p_z);
    DensityMatrix out = rho;
    for (std::size_t q : qubits) {
        out = apply_channel(ez, out, {q});
        out = apply_channel(ex, out, {q});
    }
    return out;
}

CommuteReport commute_check(const ChannelMap& ch1, const ChannelMap& ch2,
                            const StateSampler& sampler, int trials, double tol,
                            std::uint64_t seed) {
    Rng64 rng(seed);
    CommuteReport report;
    report.seed = seed;
    for (int i = 0; i < trials; ++i) {
        const DensityMatrix rho = sampler(rng);
        const DensityMatrix a = ch1(ch2(rho));
        const DensityMatrix b = ch2(ch1(rho));
        report.max_deviation = std::max(report.max_deviation, a.mat.max_abs_diff(b.mat));
    }
    report.commutes = report.max_deviation < tol;
    return report;
}

StateSampler wishart_sampler(std::size_t dim) {
    return [dim](Rng64& rng) { return random_density(dim, rng); };
}

double relaxed_closed_form(double s, double t_ns, double t1_ns, double t2_ns) {
    return 0.25 * (1.0 + std::exp(-t_ns / t1_ns) + std::exp(-t_ns / t2_ns) * (4.0 * s - 2.0));
}

double relaxed_gaussian(double s, double t_ns, double t1_ns, double t2_ns, double sigma) {
    const double coh = std::exp(-t_ns / t2_ns - sigma * sigma * t_ns * t_ns);
    return 0.25 * (1.0 + std::exp(-t_ns / t1_ns) + coh * (4.0 * s - 2.0));
}

}  // namespace spinbeats
