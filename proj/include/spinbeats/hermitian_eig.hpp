// Hermitian eigendecomposition by cyclic Jacobi rotations, and the matrix
// exponential e^{-iHt} built from it. Dimensions stay small here (<= 64),
// where Jacobi is robust and needs no external solver.
#pragma once

#include "spinbeats/complex_matrix.hpp"

namespace spinbeats {

struct EigenSystem {
    std::vector<double> values;   // ascending
    ComplexMatrix vectors;        // columns are orthonormal eigenvectors
};

// Diagonalize a Hermitian matrix. Throws std::invalid_argument when the
// input fails the Hermiticity tolerance.
EigenSystem eig_hermitian(const ComplexMatrix& h, double herm_tol = 1e-12);

// U = e^{-iHt}; unitary to ~1e-10 and exactly I at t = 0.
ComplexMatrix hermitian_evolve(const ComplexMatrix& h, double t, double herm_tol = 1e-12);

// f(H) for real f applied to eigenvalues; used for tests and oracles.
ComplexMatrix hermitian_apply(const EigenSystem& es, const std::vector<cplx>& f_of_eigs);

}  // namespace spinbeats
