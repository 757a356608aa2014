// qasm.hpp — Plain-text OpenQASM 3 rendering of circuits. Single-qubit
// controlled payloads are emitted exactly via ctrl/negctrl @ U(theta,phi,
// lambda) plus a phase gate on the control; larger payloads, which have no
// dense-matrix literal in the language, are emitted as a named placeholder
// gate whose full matrix is documented in an adjacent comment block.

#pragma once

#include "qwork/circuit.hpp"

#include <string>

namespace qwork {

// ZYZ-style parameters of a 2x2 unitary: V = e^{i gamma} U(theta, phi, lambda)
// with U(theta, phi, lambda) the standard one-qubit rotation gate.
struct OneQubitGateParams {
    double theta = 0.0;
    double phi = 0.0;
    double lambda = 0.0;
    double gamma = 0.0; // global phase
};

// Decomposes an arbitrary 2x2 unitary; reconstruction error < 1e-12.
OneQubitGateParams decompose_one_qubit_unitary(const Matrix& v);

// Reassembles e^{i gamma} U(theta, phi, lambda) (for round-trip tests).
Matrix one_qubit_unitary_from_params(const OneQubitGateParams& p);

// Renders the circuit as OpenQASM 3 source text. Deterministic: equal inputs
// produce byte-identical text.
std::string to_qasm3(const CircuitSpec& circuit, const std::string& header_comment = "");

} // namespace qwork
