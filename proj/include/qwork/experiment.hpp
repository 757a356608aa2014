// experiment.hpp — Configuration-driven orchestration: build the system from an
// ExperimentConfig, run the characteristic-function sweep, reconstruct and
// analyze the work PDF, optionally run the bath-thermometry stage, and emit
// CSV data plus a plain-text report.

#pragma once

#include "qwork/config.hpp"
#include "qwork/thermometry.hpp"
#include "qwork/work.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qwork {

struct PeakEntry {
    double position_ueV = 0.0; // expected peak location
    double weight = 0.0;       // window-integrated density
};

// Bath-thermometry stage outputs (present when the config carries a
// jarzynski block).
struct JarzynskiStageReport {
    BathTemperatureResult solve;
    Temperature t_cold;
    Temperature t_hot;
    std::filesystem::path jcurve_csv;
    std::filesystem::path cold_density_csv;
    std::filesystem::path hot_density_csv;
    std::filesystem::path root_report_path; // key = value text: root, bracket, iterations
};

// Everything a scenario run produced. The emitted CSVs alone are sufficient
// to recompute the peak table and coherence verdict; the in-memory copies are
// kept for direct inspection.
struct ScenarioReport {
    ExperimentConfig config; // resolved configuration echo

    CharFnSamples samples;   // after any damping correction
    GridDensity density;     // reconstructed work density
    DeltaComb reference_comb; // exact two-point-measurement PDF of the model

    std::vector<PeakEntry> peaks; // at w = -splitting, 0, +splitting
    CoherenceReport coherence;
    double total_mass = 0.0;              // trapezoidal mass of `density`
    double ancilla_damping_factor = 1.0;  // 1 - 2 p1A

    std::filesystem::path char_fn_csv;
    std::filesystem::path density_csv;
    std::filesystem::path reference_comb_csv;
    std::filesystem::path report_path;

    std::optional<JarzynskiStageReport> jarzynski;
    std::vector<std::string> warnings;
};

// ------------------------- pipeline entry points -------------------------------

// Full pipeline: sweep (both readout bases), reconstruction, peak extraction,
// coherence detection, optional bath-thermometry stage; writes all CSVs and
// report.txt under config.out_dir. Deterministic for a fixed config and seed.
// Errors from any stage are rethrown with a stage label (config errors keep
// their type).
ScenarioReport run_scenario(const ExperimentConfig& config);

// Same pipeline with the configured noise model unconditionally attached;
// a zero-noise model reproduces run_scenario exactly.
ScenarioReport run_noisy_emulation(const ExperimentConfig& config);

// One OpenQASM 3 file per sweep point (sigma_z readout variant), named
// sweep_XXXX.qasm under `directory`; byte-identical across runs for a fixed
// config. Returns the written paths in sweep order.
std::vector<std::filesystem::path> export_circuits(const ExperimentConfig& config,
                                                   const std::filesystem::path& directory);

// ------------------------- building blocks -------------------------------------

// 2x2 drive unitary by config name: sqrt_x, identity, or pauli_x.
Matrix drive_matrix(const std::string& name);

// 2x2 initial system state for the configured preparation.
Matrix initial_system_state(const ExperimentConfig& config);

// Assembled sweep inputs: system(+bath) Hamiltonian, padded initial state
// (joint thermal product, optionally projected onto the coupled eigenbasis),
// drive, and ancilla preparation. The override selects a different thermal
// preparation temperature (used by the thermometry stage's hot branch).
SweepSystem build_sweep_system(const ExperimentConfig& config);
SweepSystem build_sweep_system(const ExperimentConfig& config,
                               std::optional<double> preparation_mK_override);

// Register roles of the system(+bath) part, in register order.
std::vector<QubitRole> system_bath_roles(const ExperimentConfig& config);

} // namespace qwork
