// linalg.hpp — Dense complex linear algebra for few-qubit registers:
// Pauli matrices, tensor products, Hermitian eigendecomposition, unitary
// evolution operators, partial trace, and validated state/operator wrappers.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qwork {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// --------------------------- elementary matrices -----------------------------

inline Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

inline Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0.0, 1.0,
         1.0, 0.0;
    return m;
}

inline Matrix sigma_y() {
    Matrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0),
         Complex(0.0, 1.0), 0.0;
    return m;
}

inline Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1.0, 0.0,
         0.0, -1.0;
    return m;
}

inline Matrix sigma_plus() { // |1><0| raising operator (|0> = ground)
    Matrix m = Matrix::Zero(2, 2);
    m(1, 0) = 1.0;
    return m;
}

inline Matrix sigma_minus() { // |0><1|
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
}

inline Matrix hadamard() {
    Matrix m(2, 2);
    m << 1.0, 1.0,
         1.0, -1.0;
    return m / std::sqrt(2.0);
}

// sqrt(X): squares to X up to global phase; |<b|.|a>|^2 = 1/2 for all a, b.
inline Matrix sqrt_x() {
    Matrix m(2, 2);
    m << Complex(1, 1), Complex(1, -1),
         Complex(1, -1), Complex(1, 1);
    return 0.5 * m;
}

// |v><v| for a computational basis state of one qubit.
inline Matrix ket_bra(int v) {
    Matrix m = Matrix::Zero(2, 2);
    m(v, v) = 1.0;
    return m;
}

// --------------------------- wrapper types ----------------------------------

// Hermitian operator with an energy-unit convention (entries in ueV).
// Validates Hermiticity on construction.
class HermitianOperator {
public:
    explicit HermitianOperator(Matrix m, double tol = 1e-12);

    const Matrix& matrix() const { return mat_; }
    Eigen::Index dim() const { return mat_.rows(); }

private:
    Matrix mat_;
};

// Qubit role inside the register; ordering convention: qubit 0 is the
// most-significant bit of the computational-basis index.
enum class QubitRole { System, Bath, Ancilla };

// Density matrix of an n-qubit register with per-qubit role labels.
// Validates unit trace, Hermiticity and positive semidefiniteness.
class QuantumState {
public:
    QuantumState(Matrix rho, std::vector<QubitRole> roles);

    const Matrix& matrix() const { return rho_; }
    const std::vector<QubitRole>& roles() const { return roles_; }
    int num_qubits() const { return static_cast<int>(roles_.size()); }
    Eigen::Index dim() const { return rho_.rows(); }

private:
    Matrix rho_;
    std::vector<QubitRole> roles_;
};

// --------------------------- operations -------------------------------------

// Kronecker product; a's indices are most-significant in the result.
Matrix tensor_product(const Matrix& a, const Matrix& b);

// Kronecker product of a list, left factor most significant.
Matrix tensor_product(const std::vector<Matrix>& factors);

// exp(-i h t) via eigendecomposition; exact for Hermitian h (hbar = 1,
// t in 1/ueV when h is in ueV).
Matrix matrix_exp_unitary(const HermitianOperator& h, double t);

struct EighResult {
    Eigen::VectorXd eigenvalues; // ascending
    Matrix eigenvectors;         // columns, orthonormal
};

// Hermitian eigendecomposition with ascending eigenvalues.
EighResult eigh(const HermitianOperator& h);

// Reduced density matrix over the kept qubits (ascending register order).
QuantumState partial_trace(const QuantumState& state, const std::vector<int>& keep);

// Tr(obs * state); imaginary residue below 1e-10 is discarded, larger residue
// reported as a numerical error.
double expectation(const QuantumState& state, const HermitianOperator& obs);

// Embed a k-qubit operator onto the given register qubits (identity elsewhere).
// `targets` are register indices, most-significant factor of `op` first.
Matrix embed_operator(const Matrix& op, const std::vector<int>& targets, int num_qubits);

// Project a state onto the eigenspaces of h: rho -> sum_c P_c rho P_c with one
// projector per eigenvalue cluster (eigenvalues within cluster_tol merged).
// Output commutes with h; populations in the h eigenbasis are unchanged.
QuantumState dephase_in_eigenbasis(const QuantumState& state, const HermitianOperator& h,
                                   double cluster_tol = 1e-9);

// Pointwise max-norm distance between equally sized matrices.
double max_abs_diff(const Matrix& a, const Matrix& b);

} // namespace qwork
