// linalg.cpp — implementation of the dense linear-algebra substrate.

#include "qwork/linalg.hpp"
#include "qwork/constants.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>

namespace qwork {

// --------------------------- wrapper types ----------------------------------

HermitianOperator::HermitianOperator(Matrix m, double tol) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols())
        throw std::invalid_argument("HermitianOperator: matrix must be square");
    if (max_abs_diff(mat_, mat_.adjoint()) > tol)
        throw std::invalid_argument("HermitianOperator: matrix is not Hermitian within tolerance");
}

QuantumState::QuantumState(Matrix rho, std::vector<QubitRole> roles)
    : rho_(std::move(rho)), roles_(std::move(roles)) {
    if (roles_.empty())
        throw std::invalid_argument("QuantumState: register must have at least one qubit");
    if (roles_.size() > static_cast<std::size_t>(max_register_qubits))
        throw std::invalid_argument("QuantumState: register exceeds capacity of " +
                                    std::to_string(max_register_qubits) + " qubits");
    const Eigen::Index dim = Eigen::Index(1) << roles_.size();
    if (rho_.rows() != dim || rho_.cols() != dim)
        throw std::invalid_argument("QuantumState: matrix dimension does not match qubit count");
    if (std::abs(rho_.trace() - Complex(1.0, 0.0)) > 1e-10)
        throw std::invalid_argument("QuantumState: trace must equal 1");
    if (max_abs_diff(rho_, rho_.adjoint()) > 1e-10)
        throw std::invalid_argument("QuantumState: density matrix must be Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (rho_ + rho_.adjoint()),
                                                 Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("QuantumState: eigenvalue check failed to converge");
    if (solver.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("QuantumState: density matrix has negative eigenvalues");
}

// --------------------------- operations -------------------------------------

Matrix tensor_product(const Matrix& a, const Matrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

Matrix tensor_product(const std::vector<Matrix>& factors) {
    if (factors.empty())
        throw std::invalid_argument("tensor_product: factor list must be non-empty");
    Matrix acc = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i)
        acc = tensor_product(acc, factors[i]);
    return acc;
}

Matrix matrix_exp_unitary(const HermitianOperator& h, double t) {
    const EighResult ed = eigh(h);
    Vector phases(ed.eigenvalues.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k)
        phases[k] = std::exp(Complex(0.0, -ed.eigenvalues[k] * t));
    return ed.eigenvectors * phases.asDiagonal() * ed.eigenvectors.adjoint();
}

EighResult eigh(const HermitianOperator& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigh: eigendecomposition did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

QuantumState partial_trace(const QuantumState& state, const std::vector<int>& keep) {
    if (keep.empty())
        throw std::invalid_argument("partial_trace: keep set must be non-empty");
    const int n = state.num_qubits();
    std::vector<bool> kept(n, false);
    for (int q : keep) {
        if (q < 0 || q >= n)
            throw std::invalid_argument("partial_trace: qubit index out of range");
        if (kept[q])
            throw std::invalid_argument("partial_trace: duplicate qubit index");
        kept[q] = true;
    }

    std::vector<int> keep_sorted;
    std::vector<int> traced;
    for (int q = 0; q < n; ++q)
        (kept[q] ? keep_sorted : traced).push_back(q);

    const int nk = static_cast<int>(keep_sorted.size());
    const int nt = static_cast<int>(traced.size());
    const Eigen::Index dk = Eigen::Index(1) << nk;
    const Eigen::Index dt = Eigen::Index(1) << nt;

    // Full index from (kept bits, traced bits); qubit 0 is most significant.
    auto full_index = [&](Eigen::Index ik, Eigen::Index it) {
        Eigen::Index idx = 0;
        for (int b = 0; b < nk; ++b) {
            const Eigen::Index bit = (ik >> (nk - 1 - b)) & 1;
            idx |= bit << (n - 1 - keep_sorted[b]);
        }
        for (int b = 0; b < nt; ++b) {
            const Eigen::Index bit = (it >> (nt - 1 - b)) & 1;
            idx |= bit << (n - 1 - traced[b]);
        }
        return idx;
    };

    Matrix out = Matrix::Zero(dk, dk);
    for (Eigen::Index i = 0; i < dk; ++i)
        for (Eigen::Index j = 0; j < dk; ++j) {
            Complex sum = 0.0;
            for (Eigen::Index t = 0; t < dt; ++t)
                sum += state.matrix()(full_index(i, t), full_index(j, t));
            out(i, j) = sum;
        }

    std::vector<QubitRole> roles;
    roles.reserve(keep_sorted.size());
    for (int q : keep_sorted)
        roles.push_back(state.roles()[q]);
    return QuantumState(std::move(out), std::move(roles));
}

double expectation(const QuantumState& state, const HermitianOperator& obs) {
    if (obs.dim() != state.dim())
        throw std::invalid_argument("expectation: dimension mismatch between state and observable");
    const Complex val = (obs.matrix() * state.matrix()).trace();
    if (std::abs(val.imag()) > 1e-10)
        throw std::runtime_error("expectation: imaginary residue exceeds tolerance");
    return val.real();
}

Matrix embed_operator(const Matrix& op, const std::vector<int>& targets, int num_qubits) {
    if (op.rows() != op.cols())
        throw std::invalid_argument("embed_operator: operator must be square");
    const int k = static_cast<int>(targets.size());
    if (op.rows() != (Eigen::Index(1) << k))
        throw std::invalid_argument("embed_operator: operator dimension does not match target count");
    std::vector<bool> seen(num_qubits, false);
    for (int q : targets) {
        if (q < 0 || q >= num_qubits)
            throw std::invalid_argument("embed_operator: target index out of range");
        if (seen[q])
            throw std::invalid_argument("embed_operator: duplicate target index");
        seen[q] = true;
    }

    const Eigen::Index dim = Eigen::Index(1) << num_qubits;
    const Eigen::Index dop = op.rows();
    const int nr = num_qubits - k; // rest qubits
    const Eigen::Index dr = Eigen::Index(1) << nr;

    std::vector<int> rest;
    for (int q = 0; q < num_qubits; ++q)
        if (!seen[q])
            rest.push_back(q);

    auto full_index = [&](Eigen::Index iop, Eigen::Index ir) {
        Eigen::Index idx = 0;
        for (int b = 0; b < k; ++b) {
            const Eigen::Index bit = (iop >> (k - 1 - b)) & 1;
            idx |= bit << (num_qubits - 1 - targets[b]);
        }
        for (int b = 0; b < nr; ++b) {
            const Eigen::Index bit = (ir >> (nr - 1 - b)) & 1;
            idx |= bit << (num_qubits - 1 - rest[b]);
        }
        return idx;
    };

    Matrix out = Matrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dop; ++i)
        for (Eigen::Index j = 0; j < dop; ++j) {
            if (op(i, j) == Complex(0.0, 0.0))
                continue;
            for (Eigen::Index r = 0; r < dr; ++r)
                out(full_index(i, r), full_index(j, r)) = op(i, j);
        }
    return out;
}

QuantumState dephase_in_eigenbasis(const QuantumState& state, const HermitianOperator& h,
                                   double cluster_tol) {
    if (h.dim() != state.dim())
        throw std::invalid_argument("dephase_in_eigenbasis: dimension mismatch");
    const EighResult ed = eigh(h);
    Matrix out = Matrix::Zero(state.dim(), state.dim());
    Eigen::Index start = 0;
    while (start < ed.eigenvalues.size()) {
        Eigen::Index end = start + 1;
        while (end < ed.eigenvalues.size() &&
               ed.eigenvalues[end] - ed.eigenvalues[end - 1] <= cluster_tol)
            ++end;
        const Matrix block = ed.eigenvectors.middleCols(start, end - start);
        const Matrix proj = block * block.adjoint();
        out += proj * state.matrix() * proj;
        start = end;
    }
    return QuantumState(std::move(out), state.roles());
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace qwork
