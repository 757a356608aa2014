// test_linalg.cpp — elementary matrices, tensor products, eigendecomposition,
// evolution operators, partial trace, embedding, and eigenbasis dephasing,
// each checked against hand values or brute-force oracles.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"
#include "qwork/constants.hpp"
#include "qwork/linalg.hpp"

#include <cmath>
#include <numbers>

using namespace qwork;
using testutil::kron_oracle;
using testutil::partial_trace_oracle;
using testutil::random_density;
using testutil::random_hermitian;
using testutil::random_matrix;
using testutil::random_unitary;

TEST_CASE("elementary matrices satisfy their defining algebra") {
    const Matrix i2 = identity(2);
    CHECK(max_abs_diff(sigma_x() * sigma_x(), i2) < 1e-15);
    CHECK(max_abs_diff(sigma_y() * sigma_y(), i2) < 1e-15);
    CHECK(max_abs_diff(sigma_z() * sigma_z(), i2) < 1e-15);
    CHECK(max_abs_diff(sigma_x() * sigma_y(), Complex(0, 1) * sigma_z()) < 1e-15);
    CHECK(max_abs_diff(hadamard() * hadamard(), i2) < 1e-14);
    CHECK(max_abs_diff(hadamard(), (sigma_x() + sigma_z()) / std::sqrt(2.0)) < 1e-15);

    // raising/lowering with |0> = ground: sigma_plus |0> = |1>
    CHECK(sigma_plus()(1, 0) == Complex(1.0));
    CHECK(max_abs_diff(sigma_plus(), sigma_minus().adjoint()) < 1e-15);
    CHECK(max_abs_diff(sigma_plus() * sigma_minus(), ket_bra(1)) < 1e-15);

    CHECK(ket_bra(0)(0, 0) == Complex(1.0));
    CHECK(ket_bra(1)(1, 1) == Complex(1.0));
}

TEST_CASE("square root of X squares to X and scatters uniformly") {
    CHECK(max_abs_diff(sqrt_x() * sqrt_x(), sigma_x()) < 1e-15);
    CHECK(max_abs_diff(sqrt_x() * sqrt_x().adjoint(), identity(2)) < 1e-15);
    // every transition probability between basis states is exactly 1/2
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            CHECK(std::norm(sqrt_x()(b, a)) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("tensor product matches the brute-force index formula") {
    CHECK(max_abs_diff(tensor_product(identity(2), identity(2)), identity(4)) < 1e-15);

    Matrix expect(4, 4);
    expect.setZero();
    expect(0, 0) = 1.0;
    expect(2, 2) = -1.0;
    CHECK(max_abs_diff(tensor_product(sigma_z(), ket_bra(0)), expect) < 1e-15);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix a = random_matrix(rng, 2, 2);
        const Matrix b = random_matrix(rng, 3, 3);
        CHECK(max_abs_diff(tensor_product(a, b), kron_oracle(a, b)) < 1e-12);
    }
}

TEST_CASE("tensor product obeys the mixed-product rule and associativity") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix a = random_matrix(rng, 2, 2);
        const Matrix b = random_matrix(rng, 2, 2);
        const Matrix c = random_matrix(rng, 2, 2);
        const Matrix d = random_matrix(rng, 2, 2);
        CHECK(max_abs_diff(tensor_product(a, b) * tensor_product(c, d),
                           tensor_product(a * c, b * d)) < 1e-12);
        CHECK(max_abs_diff(tensor_product(tensor_product(a, b), c),
                           tensor_product(a, tensor_product(b, c))) < 1e-12);
        CHECK(max_abs_diff(tensor_product({a, b, c}),
                           tensor_product(a, tensor_product(b, c))) < 1e-12);
    }
}

TEST_CASE("Hermitian wrapper rejects non-Hermitian input") {
    CHECK_NOTHROW(HermitianOperator(sigma_y()));
    Matrix bad(2, 2);
    bad << 0.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS((void)HermitianOperator(bad), std::invalid_argument);
}

TEST_CASE("quantum state wrapper validates trace, Hermiticity, positivity, roles") {
    Matrix bell = Matrix::Zero(4, 4); // |Phi+><Phi+|
    bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
    CHECK_NOTHROW(QuantumState(bell, {QubitRole::System, QubitRole::Ancilla}));

    CHECK_THROWS_AS(QuantumState(0.9 * identity(2) / 2.0, {QubitRole::System}),
                    std::invalid_argument); // trace != 1
    Matrix nonherm = identity(2) / 2.0;
    nonherm(0, 1) = 0.3;
    CHECK_THROWS_AS(QuantumState(nonherm, {QubitRole::System}), std::invalid_argument);
    Matrix negative(2, 2);
    negative << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(QuantumState(negative, {QubitRole::System}), std::invalid_argument);
    CHECK_THROWS_AS(QuantumState(identity(4) / 4.0, {QubitRole::System}),
                    std::invalid_argument); // role count mismatch
}

TEST_CASE("evolution operator is exact for Hermitian generators") {
    const double omega = default_hbar_omega_ueV;
    const HermitianOperator h_free(-0.5 * omega * sigma_z());

    CHECK(max_abs_diff(matrix_exp_unitary(h_free, 0.0), identity(2)) < 1e-15);

    // hand-exponentiated diagonal generator
    const double t = 0.37;
    Matrix hand(2, 2);
    hand.setZero();
    hand(0, 0) = std::exp(Complex(0.0, 0.5 * omega * t));
    hand(1, 1) = std::exp(Complex(0.0, -0.5 * omega * t));
    CHECK(max_abs_diff(matrix_exp_unitary(h_free, t), hand) < 1e-12);

    // half-splitting generator over a full period gives -identity
    const HermitianOperator h_plus(0.5 * omega * sigma_z());
    const Matrix full_period = matrix_exp_unitary(h_plus, 2.0 * std::numbers::pi / omega);
    CHECK(max_abs_diff(full_period, -identity(2)) < 1e-10);
}

TEST_CASE("evolution operators are unitary and compose additively") {
    std::mt19937_64 rng(13);
    for (int dim : {2, 4, 8, 16}) {
        const HermitianOperator h(random_hermitian(rng, dim));
        const Matrix u1 = matrix_exp_unitary(h, 0.71);
        const Matrix u2 = matrix_exp_unitary(h, -1.13);
        CHECK(max_abs_diff(u1.adjoint() * u1, identity(dim)) < 1e-10);
        CHECK(max_abs_diff(u1 * u2, matrix_exp_unitary(h, 0.71 - 1.13)) < 1e-10);
    }
}

TEST_CASE("eigendecomposition is ascending, orthonormal, and reconstructs") {
    const EighResult z = eigh(HermitianOperator(sigma_z()));
    CHECK(z.eigenvalues(0) == doctest::Approx(-1.0));
    CHECK(z.eigenvalues(1) == doctest::Approx(1.0));

    const EighResult x = eigh(HermitianOperator(sigma_x()));
    CHECK(x.eigenvalues(0) == doctest::Approx(-1.0));
    CHECK(x.eigenvalues(1) == doctest::Approx(1.0));
    // eigenvectors are (|0> -+ |1>)/sqrt(2) up to phase
    for (int k = 0; k < 2; ++k) {
        CHECK(std::abs(x.eigenvectors(0, k)) == doctest::Approx(1.0 / std::sqrt(2.0)));
        CHECK(std::abs(x.eigenvectors(1, k)) == doctest::Approx(1.0 / std::sqrt(2.0)));
    }

    std::mt19937_64 rng(14);
    const Matrix h8 = random_hermitian(rng, 8);
    const EighResult r = eigh(HermitianOperator(h8));
    const Matrix lambda = r.eigenvalues.cast<Complex>().asDiagonal();
    CHECK(max_abs_diff(r.eigenvectors * lambda * r.eigenvectors.adjoint(), h8) < 1e-10);
    CHECK(max_abs_diff(r.eigenvectors.adjoint() * r.eigenvectors, identity(8)) < 1e-10);
    for (int k = 1; k < 8; ++k)
        CHECK(r.eigenvalues(k) >= r.eigenvalues(k - 1));
}

TEST_CASE("partial trace recovers factors, Bell marginals, and the index oracle") {
    std::mt19937_64 rng(15);
    const Matrix rho_a = random_density(rng, 2);
    const Matrix rho_b = random_density(rng, 2);
    const QuantumState product(tensor_product(rho_a, rho_b),
                               {QubitRole::System, QubitRole::Bath});
    CHECK(max_abs_diff(partial_trace(product, {0}).matrix(), rho_a) < 1e-12);
    CHECK(max_abs_diff(partial_trace(product, {1}).matrix(), rho_b) < 1e-12);
    CHECK(partial_trace(product, {0}).roles()[0] == QubitRole::System);
    CHECK(partial_trace(product, {1}).roles()[0] == QubitRole::Bath);

    Matrix bell = Matrix::Zero(4, 4);
    bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
    const QuantumState entangled(bell, {QubitRole::System, QubitRole::Ancilla});
    CHECK(max_abs_diff(partial_trace(entangled, {0}).matrix(), identity(2) / 2.0) < 1e-12);
    CHECK(max_abs_diff(partial_trace(entangled, {1}).matrix(), identity(2) / 2.0) < 1e-12);

    const Matrix rho3 = random_density(rng, 8);
    const QuantumState state3(rho3, {QubitRole::System, QubitRole::Bath, QubitRole::Ancilla});
    for (const std::vector<int>& keep :
         {std::vector<int>{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}}) {
        const QuantumState reduced = partial_trace(state3, keep);
        CHECK(max_abs_diff(reduced.matrix(), partial_trace_oracle(rho3, 3, keep)) < 1e-12);
        CHECK(std::abs(reduced.matrix().trace().real() - 1.0) < 1e-12);
    }

    CHECK_THROWS_AS(partial_trace(state3, {}), std::invalid_argument);
}

TEST_CASE("expectation values match hand results and spectral bounds") {
    const QuantumState ground(ket_bra(0), {QubitRole::Ancilla});
    CHECK(expectation(ground, HermitianOperator(sigma_z())) == doctest::Approx(1.0));

    Matrix plus_i(2, 2); // (|0> + i|1>)/sqrt(2)
    plus_i << 0.5, Complex(0.0, -0.5), Complex(0.0, 0.5), 0.5;
    const QuantumState state_y(plus_i, {QubitRole::Ancilla});
    CHECK(expectation(state_y, HermitianOperator(sigma_y())) == doctest::Approx(1.0));

    const QuantumState mixed(identity(2) / 2.0, {QubitRole::System});
    CHECK(expectation(mixed, HermitianOperator(sigma_x())) == doctest::Approx(0.0));
    CHECK(expectation(mixed, HermitianOperator(sigma_y())) == doctest::Approx(0.0));
    CHECK(expectation(mixed, HermitianOperator(sigma_z())) == doctest::Approx(0.0));

    std::mt19937_64 rng(16);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix obs = random_hermitian(rng, 4);
        const QuantumState rho(random_density(rng, 4), {QubitRole::System, QubitRole::Bath});
        const double value = expectation(rho, HermitianOperator(obs));
        const EighResult spectrum = eigh(HermitianOperator(obs));
        CHECK(value >= spectrum.eigenvalues.minCoeff() - 1e-10);
        CHECK(value <= spectrum.eigenvalues.maxCoeff() + 1e-10);
    }

    CHECK_THROWS_AS(expectation(mixed, HermitianOperator(identity(4))), std::invalid_argument);
}

TEST_CASE("operator embedding places factors on the requested qubits") {
    // single-qubit factor on each slot of a 3-qubit register
    CHECK(max_abs_diff(embed_operator(sigma_z(), {0}, 3),
                       tensor_product({sigma_z(), identity(2), identity(2)})) < 1e-14);
    CHECK(max_abs_diff(embed_operator(sigma_z(), {1}, 3),
                       tensor_product({identity(2), sigma_z(), identity(2)})) < 1e-14);
    CHECK(max_abs_diff(embed_operator(sigma_z(), {2}, 3),
                       tensor_product({identity(2), identity(2), sigma_z()})) < 1e-14);

    std::mt19937_64 rng(17);
    const Matrix two_qubit = random_matrix(rng, 4, 4);
    CHECK(max_abs_diff(embed_operator(two_qubit, {0, 1}, 2), two_qubit) < 1e-14);
    // adjacent placement equals a Kronecker construction
    CHECK(max_abs_diff(embed_operator(two_qubit, {1, 2}, 3),
                       tensor_product(identity(2), two_qubit)) < 1e-12);

    // non-adjacent placement: check action on every basis ket against a
    // bit-mapping oracle (qubit 0 most significant, middle qubit untouched)
    const Matrix embedded = embed_operator(two_qubit, {0, 2}, 3);
    for (int a = 0; a < 8; ++a) {
        for (int b = 0; b < 8; ++b) {
            const int a_mid = (a >> 1) & 1, b_mid = (b >> 1) & 1;
            const int a_loc = ((a >> 2) << 1) | (a & 1);
            const int b_loc = ((b >> 2) << 1) | (b & 1);
            const Complex want = (a_mid == b_mid) ? two_qubit(a_loc, b_loc) : Complex(0.0);
            CHECK(std::abs(embedded(a, b) - want) < 1e-14);
        }
    }
}

TEST_CASE("eigenbasis dephasing kills coherences, keeps populations") {
    std::mt19937_64 rng(18);
    const Matrix h = random_hermitian(rng, 4);
    const HermitianOperator hop(h);
    const QuantumState rho(random_density(rng, 4), {QubitRole::System, QubitRole::Bath});

    const QuantumState dephased = dephase_in_eigenbasis(rho, hop);
    // output commutes with the Hamiltonian
    const Matrix commutator = dephased.matrix() * h - h * dephased.matrix();
    CHECK(max_abs_diff(commutator, Matrix::Zero(4, 4)) < 1e-10);
    // populations in the eigenbasis unchanged
    const EighResult eig = eigh(hop);
    const Matrix pops_before = eig.eigenvectors.adjoint() * rho.matrix() * eig.eigenvectors;
    const Matrix pops_after =
        eig.eigenvectors.adjoint() * dephased.matrix() * eig.eigenvectors;
    for (int n = 0; n < 4; ++n)
        CHECK(std::abs(pops_before(n, n) - pops_after(n, n)) < 1e-12);
    // idempotent
    CHECK(max_abs_diff(dephase_in_eigenbasis(dephased, hop).matrix(), dephased.matrix()) <
          1e-12);

    // fully degenerate Hamiltonian: everything is one cluster, state unchanged
    const QuantumState untouched = dephase_in_eigenbasis(rho, HermitianOperator(identity(4)));
    CHECK(max_abs_diff(untouched.matrix(), rho.matrix()) < 1e-12);

    // two-fold degeneracy: coherence inside the degenerate block survives
    const Matrix hz = tensor_product(sigma_z(), identity(2)); // eigenvalues (+1,+1,-1,-1)
    Matrix block = Matrix::Zero(4, 4);
    block(0, 0) = block(1, 1) = 0.5;
    block(0, 1) = block(1, 0) = 0.4; // coherence between the two +1 states
    const QuantumState blocky(block, {QubitRole::System, QubitRole::Bath});
    const QuantumState blocky_out =
        dephase_in_eigenbasis(blocky, HermitianOperator(hz));
    CHECK(std::abs(blocky_out.matrix()(0, 1) - Complex(0.4)) < 1e-12);
}
