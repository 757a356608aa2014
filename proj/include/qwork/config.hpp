// config.hpp — Experiment configuration: a JSON document (with // comments
// permitted) describing the system, preparation, sweep, noise, bath, output,
// and optional thermometry stage. Ships named presets, one per bundled
// scenario.

#pragma once

#include "qwork/constants.hpp"
#include "qwork/noise.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qwork {

// Configuration problems (bad file, bad field, bad preset name) are reported
// as ConfigError; the CLI maps them to exit code 2, while numerical and
// diagnostic failures map to exit code 3.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Preparation { Ground, Excited, CoherentPlus, Thermal };
enum class RunMode { Exact, Shots };

// Optional bath-thermometry stage: sample the J(T) curve of mixed thermal
// preparations and solve J(T) = 1 for the bath temperature.
struct JarzynskiStage {
    double t_cold_mK = 83.0;  // system preparation behind the cold PDF
    double t_hot_mK = -87.0;  // system preparation behind the hot PDF
    double search_low_mK = 50.0;
    double search_high_mK = 400.0;
    int curve_samples = 129;
};

struct ExperimentConfig {
    std::string scenario = "custom";

    // System: level splitting directly in ueV, or derived from a frequency.
    double hbar_omega_ueV = default_hbar_omega_ueV;
    double system_freq_GHz = 0.0; // informational once hbar_omega_ueV is set
    std::string drive = "sqrt_x"; // sqrt_x | identity | pauli_x

    Preparation preparation = Preparation::Ground;
    double preparation_temperature_mK = 67.0; // used when preparation == Thermal

    double ancilla_excited_population = 0.0;
    bool correct_ancilla_damping = false;

    int sweep_points = 900;
    double delta_u = 0.013; // 1/ueV

    RunMode mode = RunMode::Exact;
    int shots = 1024;
    std::uint64_t seed = 12345;

    std::optional<BathSpec> bath;      // open system when present
    bool dephase_initial_state = true; // joint-eigenbasis dephasing of the SB prep

    bool noise_enabled = false;
    NoiseModel noise;

    std::filesystem::path out_dir = "out";
    int w_grid_points = 1001;
    double w_grid_halfwidth_factor = 2.5; // grid spans +-factor * hbar_omega
    double peak_window_halfwidth_ueV = 5.0;
    double coherence_threshold = 0.1;

    std::optional<JarzynskiStage> jarzynski;

    void validate() const; // throws ConfigError
    double u_max() const { return (sweep_points - 1) * delta_u; }
};

// --------------------------- loading -------------------------------------------

// Parses a config JSON document (// comments allowed). Unknown keys are
// rejected so typos fail loudly.
ExperimentConfig load_config_string(const std::string& json_text);
ExperimentConfig load_config_file(const std::filesystem::path& path);

// Bundled presets.
std::vector<std::string> preset_names();
std::string preset_description(const std::string& name);
std::string preset_json(const std::string& name); // throws ConfigError on unknown name
ExperimentConfig load_preset(const std::string& name);

// Resolves a --config value: an existing file path, else a preset name.
ExperimentConfig resolve_config(const std::string& path_or_preset);

} // namespace qwork
