// circuit.hpp — Gate-level construction and density-matrix execution of the
// interferometric characteristic-function circuits: an ancilla qubit is
// Hadamard-split, conditional evolutions entangle it with the system, and the
// characteristic function g(u) is read off the ancilla's sigma_z / sigma_y
// expectations.

#pragma once

#include "qwork/linalg.hpp"
#include "qwork/noise.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qwork {

// --------------------------- gates ------------------------------------------

enum class GateKind { Hadamard, PauliX, SqrtX, ControlledUnitary, Unitary, DelayEvolution };

enum class MeasBasis { Z, Y };

// Optional record of how a controlled payload was assembled, kept so the
// circuit exporter can render the drive and the delay evolution as separate
// factors instead of one anonymous product.
struct PayloadFactors {
    Matrix drive;              // raw 2x2 drive on the system qubit
    double delay = 0.0;        // evolution time (1/ueV); 0 = no delay factor
    bool delay_after_drive = false; // true: exp(-i u H) * drive; false: drive * exp(-i u H)
};

struct Gate {
    GateKind kind;
    std::vector<int> targets;                    // payload qubits, ascending
    std::optional<std::pair<int, int>> control;  // (qubit, control value 0/1)
    Matrix payload;                              // unitary on the targets
    std::optional<PayloadFactors> factors;       // exporter metadata only
    std::string label;

    // Factory helpers (validate unitarity and index disjointness).
    static Gate hadamard(int qubit);
    static Gate pauli_x(int qubit);
    static Gate sqrt_x(int qubit);
    static Gate unitary(Matrix u, std::vector<int> targets, std::string label = "unitary");
    static Gate controlled_unitary(Matrix u, std::vector<int> targets,
                                   int control_qubit, int control_value,
                                   std::string label = "controlled");
    static Gate delay_evolution(const HermitianOperator& h, double t,
                                std::vector<int> targets);

    bool is_controlled() const { return control.has_value(); }
};

// --------------------------- circuits ----------------------------------------

struct CircuitSpec {
    int num_qubits = 0;
    std::vector<Gate> gates;
    std::vector<QubitRole> roles;   // exactly one Ancilla entry
    int measured_qubit = -1;
    MeasBasis basis = MeasBasis::Z; // logical readout basis
    double delay_u = 0.0;           // the sweep parameter this circuit realizes

    void validate() const; // throws std::invalid_argument on violations
    int ancilla_qubit() const;
    int system_qubit() const;
};

// Builds the interferometric circuit for one delay value u:
//   H(ancilla);
//   controlled-[exp(-i u H0) * drive] on ancilla = 1;
//   controlled-[drive * exp(-i u H0)] on ancilla = 0;
//   H(ancilla);  then read the ancilla in `basis`.
// This printed operator ordering reproduces the trace formula
// Tr[U^dag e^{+iuH0} U e^{-iuH0} rho] exactly (verified against the direct
// computation in the tests). For basis Y a basis-change gate (S^dag then H) is
// appended so that only Z-basis readout machinery exists downstream.
//
// h0_sb acts on the system(+bath) register; drive is a 2x2 unitary on the
// system qubit alone and is identity-padded across the bath. The ancilla is
// appended as the last register qubit and is never touched by h0_sb.
CircuitSpec build_interferometric_circuit(const HermitianOperator& h0_sb,
                                          const Matrix& drive, double u, MeasBasis basis);

// Applies every gate in order to the initial state; when a noise model is
// given, the per-gate channels described in noise.hpp are inserted after each
// gate. Pure function: the input state is not modified.
QuantumState execute(const CircuitSpec& circuit, const QuantumState& initial,
                     const NoiseModel* noise = nullptr);

// Exact expectation of sigma_z or sigma_y on the reduced state of one qubit.
double measure_expectation(const QuantumState& final_state, int qubit, MeasBasis basis);

// Draws `shots` outcomes from the exact single-qubit distribution, optionally
// distorts them with a row-stochastic readout-confusion matrix and undoes the
// distortion by inverting it on the empirical frequencies, then returns the
// corrected mean of the +/-1 outcomes. Deterministic for a fixed seed and
// independent of how the surrounding sweep is scheduled.
double sample_expectation(const QuantumState& final_state, int qubit, MeasBasis basis,
                          int shots, std::uint64_t seed,
                          const Eigen::Matrix2d* confusion = nullptr);

// --------------------------- deterministic seeding ---------------------------

// Derives an independent child seed from (master, stream, substream) so that
// parallel sweeps produce bit-identical results for any worker count.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t substream);

} // namespace qwork
