// noise.hpp — Kraus-operator noise channels, per-qubit noise parameters, and
// the synthetic spectator-qubit bath that makes the system genuinely open.

#pragma once

#include "qwork/linalg.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace qwork {

// --------------------------- Kraus channels ----------------------------------

// A quantum channel as an explicit Kraus-operator list. The struct itself only
// enforces shape consistency; trace preservation and complete positivity are
// guaranteed by the channel constructors below and checked by verify_cptp
// (so that deliberately broken operator sets can be fed to the verifier).
struct KrausChannel {
    std::vector<Matrix> operators;
    std::string label;

    KrausChannel(std::vector<Matrix> ops, std::string lbl);

    Eigen::Index dim() const { return operators.front().rows(); }
    int num_qubits() const;
};

struct CptpReport {
    bool trace_preserving = false;
    bool completely_positive = false;
    double max_violation = 0.0;
};

// Uniform depolarizing channel on 1 or 2 qubits:
// {sqrt(1 - p(4^n-1)/4^n) I} + {sqrt(p/4^n) P : P a non-identity Pauli string}.
KrausChannel depolarizing_channel(double p, int num_qubits);

// Maps a reported gate fidelity to the depolarizing probability above,
// convention p = (4^n / (4^n - 1)) * (1 - F).
double depol_p_from_fidelity(double fidelity, int num_qubits);

// Thermal relaxation over a wall-clock duration: generalized amplitude damping
// toward the p_exc-weighted equilibrium (relaxation probability 1 - e^{-t/T1})
// composed with pure dephasing so the total coherence decay is e^{-t/T2}.
// Requires t2 <= 2*t1 (rejected as unphysical otherwise).
KrausChannel thermal_relaxation_channel(double t1_us, double t2_us,
                                        double duration_us, double p_exc);

// rho -> sum_k K_k rho K_k^dagger with operators embedded on `targets`.
QuantumState apply_channel(const QuantumState& state, const KrausChannel& channel,
                           const std::vector<int>& targets);

// Checks sum K^dagger K = I and positivity of the Choi matrix; reports the
// worst violation magnitude found.
CptpReport verify_cptp(const KrausChannel& channel);

// --------------------------- per-register noise model -------------------------

// Per-qubit noise parameters; defaults are noise-free.
struct QubitNoise {
    double depol_one_qubit = 0.0;  // depolarizing prob. after 1-qubit gates
    double depol_controlled = 0.0; // depolarizing prob. after controlled gates
    double t1_us = std::numeric_limits<double>::infinity();
    double t2_us = std::numeric_limits<double>::infinity();
    double equilibrium_excited_population = 0.0;
    // Row-stochastic readout confusion: row = true outcome, column = reported.
    Eigen::Matrix2d confusion = Eigen::Matrix2d::Identity();
    double initial_excited_population = 0.0;

    void validate() const; // throws std::invalid_argument on unphysical values
};

// Register-level noise description. Channel placement policy (documented here
// because the literature leaves it open):
//  - after every 1-qubit gate: depolarizing + thermal relaxation on its qubit,
//    with the 1-qubit gate duration;
//  - after every controlled gate: a 2-qubit depolarizing channel on
//    (system qubit, control qubit) using the system qubit's parameters, then
//    thermal relaxation on both, with the controlled-gate duration;
//  - bath spectator qubits are simulator-internal and receive no channels;
//  - readout confusion applies only in the sampling path, never in exact mode.
struct NoiseModel {
    std::vector<QubitNoise> qubits; // indexed by register qubit; missing = ideal
    double one_qubit_gate_duration_us = 0.0;
    double controlled_gate_duration_us = 0.0;

    const QubitNoise& qubit(int q) const;
    bool is_trivial() const; // true when every parameter is noise-free
    void validate() const;

private:
    static const QubitNoise ideal_;
};

// --------------------------- synthetic bath ----------------------------------

// Spectator-qubit environment: each spectator k has level splitting omega_k
// (ueV) and exchanges excitations with the system at strength g_k (ueV).
struct BathSpec {
    std::vector<double> spectator_freqs_ueV;
    std::vector<double> couplings_ueV;
    double temperature_mK = 0.0;

    int num_spectators() const { return static_cast<int>(spectator_freqs_ueV.size()); }
    void validate() const; // throws on negative couplings / size mismatch
    // Non-fatal flags, e.g. couplings outside the weak regime (g/omega > 0.1).
    std::vector<std::string> warnings() const;
};

// Joint Hamiltonian on the (system, spectators...) register:
//   -(omega/2) sigma_z^S  +  sum_k -(omega_k/2) sigma_z^Bk
//   + sum_k g_k (sigma_+^S sigma_-^Bk + sigma_-^S sigma_+^Bk).
// System is qubit 0, spectator k is qubit k+1.
HermitianOperator build_bath_hamiltonian(double system_freq_ueV, const BathSpec& bath);

} // namespace qwork
