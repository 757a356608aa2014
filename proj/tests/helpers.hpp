// helpers.hpp — shared test utilities: seeded random matrices/states and
// independent brute-force oracles the library implementations are checked
// against.

#pragma once

#include "qwork/linalg.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace testutil {

using qwork::Complex;
using qwork::Matrix;

inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = Complex(gauss(rng), gauss(rng));
    return m;
}

inline Matrix random_unitary(std::mt19937_64& rng, int dim) {
    const Matrix g = random_matrix(rng, dim, dim);
    Eigen::HouseholderQR<Matrix> qr(g);
    return Matrix(qr.householderQ());
}

inline Matrix random_hermitian(std::mt19937_64& rng, int dim) {
    const Matrix a = random_matrix(rng, dim, dim);
    return 0.5 * (a + a.adjoint());
}

inline Matrix random_density(std::mt19937_64& rng, int dim) {
    const Matrix g = random_matrix(rng, dim, dim);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return rho;
}

// Density matrix diagonal in the eigenbasis of h (so it commutes with h).
inline Matrix random_commuting_density(std::mt19937_64& rng, const Matrix& h_eigenvectors) {
    const int dim = static_cast<int>(h_eigenvectors.rows());
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    Eigen::VectorXd p(dim);
    double total = 0.0;
    for (int i = 0; i < dim; ++i) {
        p(i) = unif(rng);
        total += p(i);
    }
    p /= total;
    return h_eigenvectors * p.cast<Complex>().asDiagonal() * h_eigenvectors.adjoint();
}

// Brute-force Kronecker product via the index formula
// (a (x) b)[i*rb + k, j*cb + l] = a[i,j] * b[k,l].
inline Matrix kron_oracle(const Matrix& a, const Matrix& b) {
    const auto ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
    Matrix out(ra * rb, ca * cb);
    for (Eigen::Index i = 0; i < ra; ++i)
        for (Eigen::Index j = 0; j < ca; ++j)
            for (Eigen::Index k = 0; k < rb; ++k)
                for (Eigen::Index l = 0; l < cb; ++l)
                    out(i * rb + k, j * cb + l) = a(i, j) * b(k, l);
    return out;
}

// Brute-force partial trace over an n-qubit register (qubit 0 most
// significant), independent of the library's index bookkeeping.
inline Matrix partial_trace_oracle(const Matrix& rho, int num_qubits,
                                   const std::vector<int>& keep) {
    const int kept = static_cast<int>(keep.size());
    const int out_dim = 1 << kept;
    std::vector<int> traced;
    for (int q = 0; q < num_qubits; ++q)
        if (std::find(keep.begin(), keep.end(), q) == keep.end())
            traced.push_back(q);

    const auto full_index = [&](int kept_bits, int traced_bits) {
        int idx = 0;
        for (int a = 0; a < kept; ++a) {
            const int bit = (kept_bits >> (kept - 1 - a)) & 1;
            idx |= bit << (num_qubits - 1 - keep[a]);
        }
        for (std::size_t a = 0; a < traced.size(); ++a) {
            const int bit = (traced_bits >> (traced.size() - 1 - a)) & 1;
            idx |= bit << (num_qubits - 1 - traced[a]);
        }
        return idx;
    };

    Matrix out = Matrix::Zero(out_dim, out_dim);
    const int traced_dim = 1 << traced.size();
    for (int r = 0; r < out_dim; ++r)
        for (int c = 0; c < out_dim; ++c)
            for (int t = 0; t < traced_dim; ++t)
                out(r, c) += rho(full_index(r, t), full_index(c, t));
    return out;
}

} // namespace testutil
