// circuit.cpp — gate factories, circuit assembly, density-matrix execution,
// exact and sampled readout.

#include "qwork/circuit.hpp"
#include "qwork/constants.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qwork {

// --------------------------- gate factories -----------------------------------

namespace {

void check_unitary(const Matrix& u, const std::string& who) {
    if (u.rows() != u.cols())
        throw std::invalid_argument(who + ": payload must be square");
    if (max_abs_diff(u.adjoint() * u, identity(u.rows())) > 1e-10)
        throw std::invalid_argument(who + ": payload is not unitary within tolerance");
}

void check_targets(const Matrix& u, const std::vector<int>& targets, const std::string& who) {
    if (u.rows() != (Eigen::Index(1) << targets.size()))
        throw std::invalid_argument(who + ": payload dimension does not match target count");
    for (std::size_t i = 1; i < targets.size(); ++i)
        if (targets[i] <= targets[i - 1])
            throw std::invalid_argument(who + ": targets must be strictly ascending");
}

} // namespace

Gate Gate::hadamard(int qubit) {
    return Gate{GateKind::Hadamard, {qubit}, std::nullopt, qwork::hadamard(), std::nullopt, "h"};
}

Gate Gate::pauli_x(int qubit) {
    return Gate{GateKind::PauliX, {qubit}, std::nullopt, sigma_x(), std::nullopt, "x"};
}

Gate Gate::sqrt_x(int qubit) {
    return Gate{GateKind::SqrtX, {qubit}, std::nullopt, qwork::sqrt_x(), std::nullopt, "sx"};
}

Gate Gate::unitary(Matrix u, std::vector<int> targets, std::string label) {
    check_unitary(u, "Gate::unitary");
    check_targets(u, targets, "Gate::unitary");
    return Gate{GateKind::Unitary, std::move(targets), std::nullopt, std::move(u),
                std::nullopt, std::move(label)};
}

Gate Gate::controlled_unitary(Matrix u, std::vector<int> targets, int control_qubit,
                              int control_value, std::string label) {
    check_unitary(u, "Gate::controlled_unitary");
    check_targets(u, targets, "Gate::controlled_unitary");
    if (control_value != 0 && control_value != 1)
        throw std::invalid_argument("Gate::controlled_unitary: control value must be 0 or 1");
    if (std::find(targets.begin(), targets.end(), control_qubit) != targets.end())
        throw std::invalid_argument("Gate::controlled_unitary: control qubit cannot be a target");
    return Gate{GateKind::ControlledUnitary, std::move(targets),
                std::make_pair(control_qubit, control_value), std::move(u),
                std::nullopt, std::move(label)};
}

Gate Gate::delay_evolution(const HermitianOperator& h, double t, std::vector<int> targets) {
    Matrix u = matrix_exp_unitary(h, t);
    check_targets(u, targets, "Gate::delay_evolution");
    return Gate{GateKind::DelayEvolution, std::move(targets), std::nullopt, std::move(u),
                std::nullopt, "delay"};
}

// --------------------------- circuit assembly ---------------------------------

void CircuitSpec::validate() const {
    if (num_qubits < 1 || num_qubits > max_register_qubits)
        throw std::invalid_argument("CircuitSpec: register size out of range");
    if (static_cast<int>(roles.size()) != num_qubits)
        throw std::invalid_argument("CircuitSpec: role list must cover every qubit");
    int ancillas = 0;
    for (QubitRole r : roles)
        if (r == QubitRole::Ancilla)
            ++ancillas;
    if (ancillas != 1)
        throw std::invalid_argument("CircuitSpec: exactly one ancilla qubit required");
    auto in_range = [&](int q) { return q >= 0 && q < num_qubits; };
    for (const Gate& g : gates) {
        for (int q : g.targets)
            if (!in_range(q))
                throw std::invalid_argument("CircuitSpec: gate target out of range");
        if (g.control && !in_range(g.control->first))
            throw std::invalid_argument("CircuitSpec: control qubit out of range");
    }
    if (measured_qubit >= 0 && !in_range(measured_qubit))
        throw std::invalid_argument("CircuitSpec: measured qubit out of range");
}

int CircuitSpec::ancilla_qubit() const {
    for (int q = 0; q < num_qubits; ++q)
        if (roles[q] == QubitRole::Ancilla)
            return q;
    throw std::logic_error("CircuitSpec: no ancilla qubit");
}

int CircuitSpec::system_qubit() const {
    for (int q = 0; q < num_qubits; ++q)
        if (roles[q] == QubitRole::System)
            return q;
    throw std::logic_error("CircuitSpec: no system qubit");
}

CircuitSpec build_interferometric_circuit(const HermitianOperator& h0_sb,
                                          const Matrix& drive, double u, MeasBasis basis) {
    if (u < 0.0)
        throw std::invalid_argument(
            "build_interferometric_circuit: delay u must be non-negative");
    if (drive.rows() != 2 || drive.cols() != 2)
        throw std::invalid_argument(
            "build_interferometric_circuit: drive must act on the system qubit alone");
    check_unitary(drive, "build_interferometric_circuit");

    int n_sb = 0;
    for (Eigen::Index d = h0_sb.dim(); d > 1; d >>= 1)
        ++n_sb;
    if ((Eigen::Index(1) << n_sb) != h0_sb.dim())
        throw std::invalid_argument(
            "build_interferometric_circuit: Hamiltonian dimension must be a power of two");
    const int n = n_sb + 1; // + ancilla
    if (n > max_register_qubits)
        throw std::invalid_argument("build_interferometric_circuit: register exceeds capacity");
    const int ancilla = n - 1;

    // Identity-pad the drive across the bath factors.
    Matrix drive_sb = n_sb == 1 ? drive : tensor_product(drive, identity(Eigen::Index(1) << (n_sb - 1)));
    const Matrix evolution = matrix_exp_unitary(h0_sb, u);

    std::vector<int> sb_targets(n_sb);
    for (int q = 0; q < n_sb; ++q)
        sb_targets[q] = q;

    CircuitSpec circuit;
    circuit.num_qubits = n;
    circuit.roles.assign(n, QubitRole::Bath);
    circuit.roles[0] = QubitRole::System;
    circuit.roles[ancilla] = QubitRole::Ancilla;
    circuit.measured_qubit = ancilla;
    circuit.basis = basis;
    circuit.delay_u = u;

    circuit.gates.push_back(Gate::hadamard(ancilla));

    Gate g1 = Gate::controlled_unitary(evolution * drive_sb, sb_targets, ancilla, 1,
                                       "g1_drive_then_evolve");
    g1.factors = PayloadFactors{drive, u, /*delay_after_drive=*/true};
    circuit.gates.push_back(std::move(g1));

    Gate g0 = Gate::controlled_unitary(drive_sb * evolution, sb_targets, ancilla, 0,
                                       "g0_evolve_then_drive");
    g0.factors = PayloadFactors{drive, u, /*delay_after_drive=*/false};
    circuit.gates.push_back(std::move(g0));

    circuit.gates.push_back(Gate::hadamard(ancilla));

    if (basis == MeasBasis::Y) {
        // Map the sigma_y eigenbasis onto sigma_z: rho -> V rho V^dag with
        // V = H * S^dag, so <sigma_z> afterwards equals <sigma_y> before.
        Matrix sdg(2, 2);
        sdg << 1.0, 0.0, 0.0, Complex(0.0, -1.0);
        circuit.gates.push_back(Gate::unitary(qwork::hadamard() * sdg, {ancilla}, "y_basis_change"));
    }

    circuit.validate();
    return circuit;
}

// --------------------------- execution ----------------------------------------

namespace {

// Full-register unitary for one gate (control embedding included).
Matrix gate_unitary(const Gate& g, int num_qubits) {
    if (!g.control)
        return embed_operator(g.payload, g.targets, num_qubits);
    const auto [cq, cv] = *g.control;
    // |cv><cv| (x) payload + |1-cv><1-cv| (x) identity, built on the
    // (control + targets) subspace with the control as the most-significant
    // local qubit, then placed on the register by embedding.
    const Eigen::Index dp = g.payload.rows();
    Matrix block = Matrix::Zero(2 * dp, 2 * dp);
    const Eigen::Index on = cv == 1 ? dp : 0;   // control-value block
    const Eigen::Index off = cv == 1 ? 0 : dp;
    block.block(on, on, dp, dp) = g.payload;
    block.block(off, off, dp, dp) = identity(dp);
    std::vector<int> local = g.targets;
    local.insert(local.begin(), cq); // control is the most-significant factor
    return embed_operator(block, local, num_qubits);
}

// Register qubits a gate's noise channels act on (see policy in noise.hpp).
std::vector<int> noisy_qubits(const Gate& g, const CircuitSpec& circuit) {
    if (g.is_controlled()) {
        const int sys = circuit.system_qubit();
        const int ctl = g.control->first;
        if (sys == ctl)
            return {sys};
        return {sys, ctl};
    }
    std::vector<int> out;
    for (int q : g.targets)
        if (circuit.roles[q] != QubitRole::Bath)
            out.push_back(q);
    return out;
}

void apply_gate_noise(Matrix& rho, const Gate& g, const CircuitSpec& circuit,
                      const NoiseModel& noise) {
    const std::vector<int> phys = noisy_qubits(g, circuit);
    if (phys.empty())
        return;
    const std::vector<QubitRole> roles = circuit.roles;
    QuantumState state(rho, roles);

    if (g.is_controlled()) {
        const double p = noise.qubit(circuit.system_qubit()).depol_controlled;
        if (p > 0.0)
            state = apply_channel(state, depolarizing_channel(p, static_cast<int>(phys.size())),
                                  phys);
        for (int q : phys) {
            const QubitNoise& qn = noise.qubit(q);
            state = apply_channel(state,
                                  thermal_relaxation_channel(qn.t1_us, qn.t2_us,
                                                             noise.controlled_gate_duration_us,
                                                             qn.equilibrium_excited_population),
                                  {q});
        }
    } else {
        for (int q : phys) {
            const QubitNoise& qn = noise.qubit(q);
            if (qn.depol_one_qubit > 0.0)
                state = apply_channel(state, depolarizing_channel(qn.depol_one_qubit, 1), {q});
            state = apply_channel(state,
                                  thermal_relaxation_channel(qn.t1_us, qn.t2_us,
                                                             noise.one_qubit_gate_duration_us,
                                                             qn.equilibrium_excited_population),
                                  {q});
        }
    }
    rho = state.matrix();
}

} // namespace

QuantumState execute(const CircuitSpec& circuit, const QuantumState& initial,
                     const NoiseModel* noise) {
    circuit.validate();
    if (initial.num_qubits() != circuit.num_qubits)
        throw std::invalid_argument("execute: state register does not match circuit register");
    if (noise)
        noise->validate();

    Matrix rho = initial.matrix();
    for (const Gate& g : circuit.gates) {
        const Matrix u = gate_unitary(g, circuit.num_qubits);
        rho = u * rho * u.adjoint();
        if (noise)
            apply_gate_noise(rho, g, circuit, *noise);
    }
    return QuantumState(std::move(rho), initial.roles());
}

// --------------------------- readout ------------------------------------------

namespace {

// Probability of the +1 outcome for sigma_z / sigma_y on one qubit.
double plus_probability(const QuantumState& state, int qubit, MeasBasis basis) {
    const QuantumState red = partial_trace(state, {qubit});
    const Matrix obs = basis == MeasBasis::Z ? sigma_z() : sigma_y();
    const Complex ev = (obs * red.matrix()).trace();
    if (std::abs(ev.imag()) > 1e-10)
        throw std::runtime_error("readout: imaginary residue exceeds tolerance");
    return std::clamp(0.5 * (1.0 + ev.real()), 0.0, 1.0);
}

} // namespace

double measure_expectation(const QuantumState& final_state, int qubit, MeasBasis basis) {
    return 2.0 * plus_probability(final_state, qubit, basis) - 1.0;
}

double sample_expectation(const QuantumState& final_state, int qubit, MeasBasis basis,
                          int shots, std::uint64_t seed, const Eigen::Matrix2d* confusion) {
    if (shots < 1)
        throw std::invalid_argument("sample_expectation: shots must be >= 1");

    const double p_plus = plus_probability(final_state, qubit, basis);
    // Reported-outcome probability after the confusion map (row = true outcome,
    // with row 0 = the +1 outcome = bit value 0).
    double p_report_plus = p_plus;
    if (confusion)
        p_report_plus = p_plus * (*confusion)(0, 0) + (1.0 - p_plus) * (*confusion)(1, 0);

    std::mt19937_64 rng(seed);
    // Portable uniform in [0,1): top 53 bits of the generator output. Avoids
    // std::uniform_real_distribution, whose stream is implementation-defined.
    auto canonical = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    long plus_count = 0;
    for (int s = 0; s < shots; ++s)
        if (canonical() < p_report_plus)
            ++plus_count;

    double f_plus = static_cast<double>(plus_count) / shots;
    if (confusion) {
        const double det = (*confusion)(0, 0) * (*confusion)(1, 1) -
                           (*confusion)(0, 1) * (*confusion)(1, 0);
        if (std::abs(det) < 1e-12)
            throw std::runtime_error("sample_expectation: confusion matrix is singular");
        // Frequencies transform as a row vector, f_report = f_true * C;
        // invert on the empirical estimate: f_true = f_report * C^{-1}.
        const double f_minus = 1.0 - f_plus;
        const double inv00 = (*confusion)(1, 1) / det;
        const double inv10 = -(*confusion)(1, 0) / det;
        f_plus = f_plus * inv00 + f_minus * inv10;
    }
    return 2.0 * f_plus - 1.0;
}

// --------------------------- deterministic seeding ----------------------------

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t substream) {
    // splitmix64 finalization over the mixed triple; statistically independent
    // child streams for distinct inputs.
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(master);
    h = mix(h ^ (stream + 0x517cc1b727220a95ULL));
    h = mix(h ^ (substream + 0x2545f4914f6cdd1dULL));
    return h;
}

} // namespace qwork
