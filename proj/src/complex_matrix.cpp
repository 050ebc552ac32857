#include "spinbeats/complex_matrix.hpp"

#include <algorithm>
#include <limits>

namespace spinbeats {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0.0, 0.0)) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return c;
}

ComplexMatrix kron_all(const std::vector<ComplexMatrix>& factors) {
    if (factors.empty()) return ComplexMatrix::identity(1);
    ComplexMatrix out = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
    return out;
}

ComplexMatrix embed_qubit_op(const ComplexMatrix& op, const std::vector<std::size_t>& targets,
                             std::size_t nqubits) {
    const std::size_t k = targets.size();
    if (op.rows() != (std::size_t{1} << k) || !op.is_square())
        throw std::invalid_argument("embed_qubit_op: operator dim does not match target count");
    for (std::size_t t : targets)
        if (t >= nqubits) throw std::invalid_argument("embed_qubit_op: target out of range");

    const std::size_t dim = std::size_t{1} << nqubits;
    ComplexMatrix out(dim, dim);
    // Qubit 0 is the most significant bit of the basis index.
    auto bit_of = [nqubits](std::size_t idx, std::size_t qubit) {
        return (idx >> (nqubits - 1 - qubit)) & 1u;
    };
    for (std::size_t row = 0; row < dim; ++row) {
        std::size_t oprow = 0;
        for (std::size_t b = 0; b < k; ++b) oprow = (oprow << 1) | bit_of(row, targets[b]);
        for (std::size_t opcol = 0; opcol < (std::size_t{1} << k); ++opcol) {
            const cplx v = op(oprow, opcol);
            if (v == cplx(0.0, 0.0)) continue;
            // column index: same as row outside targets, opcol bits inside
            std::size_t col = row;
            for (std::size_t b = 0; b < k; ++b) {
                const std::size_t shift = nqubits - 1 - targets[b];
                const std::size_t bit = (opcol >> (k - 1 - b)) & 1u;
                col = (col & ~(std::size_t{1} << shift)) | (bit << shift);
            }
            out(row, col) = v;
        }
    }
    return out;
}

}  // namespace spinbeats
