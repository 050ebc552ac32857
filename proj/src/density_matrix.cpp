#include "spinbeats/density_matrix.hpp"

#include <cmath>
#include <numeric>

#include "spinbeats/hermitian_eig.hpp"
#include "spinbeats/rng.hpp"

namespace spinbeats {

void DensityMatrix::validate(double herm_tol, double trace_tol, double eig_floor) const {
    if (mat.hermiticity_defect() >= herm_tol)
        throw std::runtime_error("DensityMatrix: not Hermitian to tolerance");
    if (std::abs(mat.trace() - cplx(1.0, 0.0)) >= trace_tol)
        throw std::runtime_error("DensityMatrix: trace differs from 1");
    const EigenSystem es = eig_hermitian(mat, 1e-10);
    for (double v : es.values)
        if (v < eig_floor) throw std::runtime_error("DensityMatrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::pure(const std::vector<cplx>& amplitudes) {
    double n2 = 0.0;
    for (const auto& a : amplitudes) n2 += std::norm(a);
    if (n2 <= 0.0) throw std::invalid_argument("DensityMatrix::pure: zero vector");
    const double inv = 1.0 / n2;
    ComplexMatrix m(amplitudes.size(), amplitudes.size());
    for (std::size_t i = 0; i < amplitudes.size(); ++i)
        for (std::size_t j = 0; j < amplitudes.size(); ++j)
            m(i, j) = amplitudes[i] * std::conj(amplitudes[j]) * inv;
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    ComplexMatrix m = ComplexMatrix::identity(dim);
    m *= cplx(1.0 / static_cast<double>(dim), 0.0);
    return DensityMatrix(std::move(m));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep) {
    const std::size_t total =
        std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
    if (total != rho.dim())
        throw std::invalid_argument("partial_trace: product of dims does not match rho dim");
    for (std::size_t k : keep)
        if (k >= dims.size()) throw std::invalid_argument("partial_trace: keep index out of range");

    std::vector<bool> kept(dims.size(), false);
    for (std::size_t k : keep) kept[k] = true;

    // strides of each subsystem in the flattened index
    std::vector<std::size_t> stride(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) stride[i - 1] = stride[i] * dims[i];

    std::size_t dim_keep = 1, dim_traced = 1;
    std::vector<std::size_t> keep_idx, traced_idx;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (kept[i]) { dim_keep *= dims[i]; keep_idx.push_back(i); }
        else         { dim_traced *= dims[i]; traced_idx.push_back(i); }
    }

    // flattened offset of the m-th kept (or traced) multi-index
    auto offset = [&](const std::vector<std::size_t>& subs, std::size_t m) {
        std::size_t off = 0;
        for (std::size_t i = subs.size(); i-- > 0;) {
            const std::size_t d = dims[subs[i]];
            off += (m % d) * stride[subs[i]];
            m /= d;
        }
        return off;
    };

    std::vector<std::size_t> keep_off(dim_keep), traced_off(dim_traced);
    for (std::size_t m = 0; m < dim_keep; ++m) keep_off[m] = offset(keep_idx, m);
    for (std::size_t m = 0; m < dim_traced; ++m) traced_off[m] = offset(traced_idx, m);

    ComplexMatrix out(dim_keep, dim_keep);
    for (std::size_t i = 0; i < dim_keep; ++i)
        for (std::size_t j = 0; j < dim_keep; ++j) {
            cplx acc = 0.0;
            for (std::size_t m = 0; m < dim_traced; ++m)
                acc += rho.mat(keep_off[i] + traced_off[m], keep_off[j] + traced_off[m]);
            out(i, j) = acc;
        }
    return DensityMatrix(std::move(out));
}

DensityMatrix random_density(std::size_t dim, Rng64& rng) {
    ComplexMatrix a(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) a(i, j) = cplx(rng.normal(), rng.normal());
    ComplexMatrix m = a * a.adjoint();
    const double tr = m.trace().real();
    m *= cplx(1.0 / tr, 0.0);
    return DensityMatrix(std::move(m));
}

}  // namespace spinbeats
