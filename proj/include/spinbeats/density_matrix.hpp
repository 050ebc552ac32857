// Density matrices and the partial trace.
#pragma once

#include "spinbeats/complex_matrix.hpp"

namespace spinbeats {

struct DensityMatrix {
    ComplexMatrix mat;

    DensityMatrix() = default;
    explicit DensityMatrix(ComplexMatrix m) : mat(std::move(m)) {
        if (!mat.is_square()) throw std::invalid_argument("DensityMatrix: not square");
    }

    std::size_t dim() const { return mat.rows(); }

    // Hermitian to 1e-12, unit trace to 1e-12, eigenvalues >= -1e-10.
    // Costs an eigendecomposition; meant for boundaries and tests.
    void validate(double herm_tol = 1e-12, double trace_tol = 1e-12, double eig_floor = -1e-10) const;

    static DensityMatrix pure(const std::vector<cplx>& amplitudes);
    static DensityMatrix maximally_mixed(std::size_t dim);
};

// Trace out all subsystems not listed in `keep`. `dims` are the subsystem
// dimensions in tensor order; their product must equal rho.dim(). The kept
// subsystems appear in the result in their original relative order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep);

// rho = A A^dagger / tr(A A^dagger) with A entries standard complex Gaussian.
// Full rank with probability one; used by the randomized checks.
class Rng64;
DensityMatrix random_density(std::size_t dim, Rng64& rng);

}  // namespace spinbeats
