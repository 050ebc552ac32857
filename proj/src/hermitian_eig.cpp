#include "spinbeats/hermitian_eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spinbeats {

namespace {

double offdiag_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) s += std::norm(a(i, j));
    return std::sqrt(2.0 * s);
}

}  // namespace

EigenSystem eig_hermitian(const ComplexMatrix& h, double herm_tol) {
    if (!h.is_square()) throw std::invalid_argument("eig_hermitian: matrix not square");
    const double scale = std::max(1.0, h.max_abs());
    if (h.hermiticity_defect() > herm_tol * scale)
        throw std::invalid_argument("eig_hermitian: matrix not Hermitian to tolerance");

    const std::size_t n = h.rows();
    ComplexMatrix a = h;
    // enforce exact Hermitian symmetry so rotations stay consistent
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = cplx(a(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) a(j, i) = std::conj(a(i, j));
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double stop = 1e-15 * std::max(1.0, a.max_abs()) * static_cast<double>(n);
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps && offdiag_norm(a) > stop; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= stop * 1e-2) continue;

                // Unitary 2x2 rotation zeroing a(p,q): columns p,q of the
                // basis mix as |p> -> c|p> + s|q>, |q> -> -conj(s)|p> + c|q>
                // with s = sin(theta) * phase(apq).
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double tt = (tau >= 0.0 ? -1.0 : 1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + tt * tt);
                const cplx phase = apq / mag;
                const cplx s = tt * c * phase;

                // A <- G^dagger A G applied in place (rows then columns).
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = c * akp + std::conj(s) * akq;
                    a(k, q) = -s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = c * apk + s * aqk;
                    a(q, k) = -std::conj(s) * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = cplx(a(p, p).real(), 0.0);
                a(q, q) = cplx(a(q, q).real(), 0.0);

                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q);
                    v(k, p) = c * vkp + std::conj(s) * vkq;
                    v(k, q) = -s * vkp + c * vkq;
                }
            }
        }
    }

    EigenSystem es;
    es.values.resize(n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> raw(n);
    for (std::size_t i = 0; i < n; ++i) raw[i] = a(i, i).real();
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return raw[x] < raw[y]; });

    es.vectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        es.values[j] = raw[order[j]];
        for (std::size_t i = 0; i < n; ++i) es.vectors(i, j) = v(i, order[j]);
    }
    return es;
}

ComplexMatrix hermitian_apply(const EigenSystem& es, const std::vector<cplx>& f_of_eigs) {
    const std::size_t n = es.values.size();
    if (f_of_eigs.size() != n)
        throw std::invalid_argument("hermitian_apply: wrong number of eigenvalues");
    ComplexMatrix scaled = es.vectors;  // columns scaled by f(lambda_j)
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= f_of_eigs[j];
    return scaled * es.vectors.adjoint();
}

ComplexMatrix hermitian_evolve(const ComplexMatrix& h, double t, double herm_tol) {
    const EigenSystem es = eig_hermitian(h, herm_tol);
    std::vector<cplx> phases(es.values.size());
    for (std::size_t j = 0; j < phases.size(); ++j)
        phases[j] = std::exp(cplx(0.0, -es.values[j] * t));
    return hermitian_apply(es, phases);
}

}  // namespace spinbeats
