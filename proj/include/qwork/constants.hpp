// constants.hpp — Physical constants and unit conventions.
//
// Unit system: hbar = 1, energies in micro-eV (ueV), times in 1/ueV,
// temperatures in milli-Kelvin (mK), wall-clock gate durations in micro-seconds.

#pragma once

namespace qwork {

// Boltzmann constant in ueV per mK (86.17 ueV/K).
inline constexpr double k_boltzmann_ueV_per_mK = 0.08617;

// Planck constant in ueV per GHz: converts a qubit frequency f to the level
// splitting h*f in ueV.
inline constexpr double planck_ueV_per_GHz = 4.1357;

// Canonical level splitting of the reference qubit (ueV). Corresponds to a
// 4.85 GHz transmon rounded to 20.04 ueV.
inline constexpr double default_hbar_omega_ueV = 20.04;

// Hard capacity limit of the dense simulator (system + bath + ancilla).
inline constexpr int max_register_qubits = 8;

} // namespace qwork
