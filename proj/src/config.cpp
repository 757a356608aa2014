// config.cpp — JSON config parsing (comments allowed), validation, presets.

#include "qwork/config.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace qwork {

namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw ConfigError("config: unknown key \"" + it.key() + "\" in " + where);
    }
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number())
        throw ConfigError("config: " + where + " must be a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& where) {
    if (!v.is_number_integer())
        throw ConfigError("config: " + where + " must be an integer");
    return v.get<int>();
}

void parse_system(const json& sys, ExperimentConfig& cfg) {
    check_keys(sys, {"level_splitting_ueV", "frequency_GHz", "drive", "preparation"}, "system");
    if (sys.contains("frequency_GHz")) {
        cfg.system_freq_GHz = as_number(sys["frequency_GHz"], "system.frequency_GHz");
        cfg.hbar_omega_ueV = planck_ueV_per_GHz * cfg.system_freq_GHz;
    }
    if (sys.contains("level_splitting_ueV")) // explicit splitting wins over frequency
        cfg.hbar_omega_ueV = as_number(sys["level_splitting_ueV"], "system.level_splitting_ueV");
    if (sys.contains("drive")) {
        cfg.drive = sys["drive"].get<std::string>();
        if (cfg.drive != "sqrt_x" && cfg.drive != "identity" && cfg.drive != "pauli_x")
            throw ConfigError("config: system.drive must be sqrt_x, identity, or pauli_x");
    }
    if (sys.contains("preparation")) {
        const json& prep = sys["preparation"];
        if (prep.is_string()) {
            const std::string s = prep.get<std::string>();
            if (s == "ground")
                cfg.preparation = Preparation::Ground;
            else if (s == "excited")
                cfg.preparation = Preparation::Excited;
            else if (s == "coherent_plus")
                cfg.preparation = Preparation::CoherentPlus;
            else
                throw ConfigError("config: unknown preparation \"" + s + "\"");
        } else if (prep.is_object()) {
            check_keys(prep, {"thermal_mK"}, "system.preparation");
            if (!prep.contains("thermal_mK"))
                throw ConfigError("config: preparation object requires thermal_mK");
            cfg.preparation = Preparation::Thermal;
            cfg.preparation_temperature_mK = as_number(prep["thermal_mK"], "thermal_mK");
        } else {
            throw ConfigError("config: preparation must be a string or {\"thermal_mK\": ...}");
        }
    }
}

void parse_noise_qubit(const json& q, QubitNoise& out, const std::string& where) {
    check_keys(q,
               {"depol_one_qubit", "depol_controlled", "t1_us", "t2_us",
                "equilibrium_excited_population", "confusion", "initial_excited_population"},
               where);
    if (q.contains("depol_one_qubit"))
        out.depol_one_qubit = as_number(q["depol_one_qubit"], where + ".depol_one_qubit");
    if (q.contains("depol_controlled"))
        out.depol_controlled = as_number(q["depol_controlled"], where + ".depol_controlled");
    if (q.contains("t1_us"))
        out.t1_us = as_number(q["t1_us"], where + ".t1_us");
    if (q.contains("t2_us"))
        out.t2_us = as_number(q["t2_us"], where + ".t2_us");
    if (q.contains("equilibrium_excited_population"))
        out.equilibrium_excited_population =
            as_number(q["equilibrium_excited_population"], where + ".equilibrium");
    if (q.contains("initial_excited_population"))
        out.initial_excited_population =
            as_number(q["initial_excited_population"], where + ".initial");
    if (q.contains("confusion")) {
        const json& c = q["confusion"];
        if (!c.is_array() || c.size() != 2 || !c[0].is_array() || c[0].size() != 2 ||
            !c[1].is_array() || c[1].size() != 2)
            throw ConfigError("config: " + where + ".confusion must be a 2x2 array");
        for (int r = 0; r < 2; ++r)
            for (int col = 0; col < 2; ++col)
                out.confusion(r, col) = as_number(c[r][col], where + ".confusion");
    }
}

ExperimentConfig parse_config(const json& doc) {
    if (!doc.is_object())
        throw ConfigError("config: document root must be an object");
    check_keys(doc,
               {"scenario", "system", "ancilla", "sweep", "mode", "shots", "seed", "bath",
                "noise", "output", "jarzynski"},
               "top level");

    ExperimentConfig cfg;
    if (doc.contains("scenario"))
        cfg.scenario = doc["scenario"].get<std::string>();
    if (doc.contains("system"))
        parse_system(doc["system"], cfg);

    if (doc.contains("ancilla")) {
        const json& anc = doc["ancilla"];
        check_keys(anc, {"excited_population", "correct_damping"}, "ancilla");
        if (anc.contains("excited_population"))
            cfg.ancilla_excited_population =
                as_number(anc["excited_population"], "ancilla.excited_population");
        if (anc.contains("correct_damping"))
            cfg.correct_ancilla_damping = anc["correct_damping"].get<bool>();
    }

    if (doc.contains("sweep")) {
        const json& sw = doc["sweep"];
        check_keys(sw, {"points", "delta_u"}, "sweep");
        if (sw.contains("points"))
            cfg.sweep_points = as_int(sw["points"], "sweep.points");
        if (sw.contains("delta_u"))
            cfg.delta_u = as_number(sw["delta_u"], "sweep.delta_u");
    }

    if (doc.contains("mode")) {
        const json& mode = doc["mode"];
        if (mode.is_string() && mode.get<std::string>() == "exact") {
            cfg.mode = RunMode::Exact;
        } else if (mode.is_object()) {
            check_keys(mode, {"shots"}, "mode");
            if (!mode.contains("shots"))
                throw ConfigError("config: mode object requires shots");
            cfg.mode = RunMode::Shots;
            cfg.shots = as_int(mode["shots"], "mode.shots");
        } else {
            throw ConfigError("config: mode must be \"exact\" or {\"shots\": n}");
        }
    }
    if (doc.contains("seed"))
        cfg.seed = doc["seed"].get<std::uint64_t>();

    if (doc.contains("bath")) {
        const json& bath = doc["bath"];
        check_keys(bath,
                   {"spectator_freqs_ueV", "couplings_ueV", "temperature_mK",
                    "dephase_initial_state"},
                   "bath");
        BathSpec spec;
        if (bath.contains("spectator_freqs_ueV"))
            spec.spectator_freqs_ueV = bath["spectator_freqs_ueV"].get<std::vector<double>>();
        if (bath.contains("couplings_ueV"))
            spec.couplings_ueV = bath["couplings_ueV"].get<std::vector<double>>();
        if (bath.contains("temperature_mK"))
            spec.temperature_mK = as_number(bath["temperature_mK"], "bath.temperature_mK");
        if (bath.contains("dephase_initial_state"))
            cfg.dephase_initial_state = bath["dephase_initial_state"].get<bool>();
        cfg.bath = std::move(spec);
    }

    if (doc.contains("noise")) {
        const json& noise = doc["noise"];
        check_keys(noise, {"one_qubit_gate_duration_us", "controlled_gate_duration_us", "qubits"},
                   "noise");
        cfg.noise_enabled = true;
        if (noise.contains("one_qubit_gate_duration_us"))
            cfg.noise.one_qubit_gate_duration_us =
                as_number(noise["one_qubit_gate_duration_us"], "noise.one_qubit_gate_duration_us");
        if (noise.contains("controlled_gate_duration_us"))
            cfg.noise.controlled_gate_duration_us = as_number(
                noise["controlled_gate_duration_us"], "noise.controlled_gate_duration_us");
        if (noise.contains("qubits")) {
            const json& qubits = noise["qubits"];
            if (!qubits.is_array())
                throw ConfigError("config: noise.qubits must be an array");
            for (std::size_t i = 0; i < qubits.size(); ++i) {
                QubitNoise qn;
                parse_noise_qubit(qubits[i], qn, "noise.qubits[" + std::to_string(i) + "]");
                cfg.noise.qubits.push_back(qn);
            }
        }
    }

    if (doc.contains("output")) {
        const json& out = doc["output"];
        check_keys(out,
                   {"directory", "w_grid_points", "w_grid_halfwidth_factor",
                    "peak_window_halfwidth_ueV", "coherence_threshold"},
                   "output");
        if (out.contains("directory"))
            cfg.out_dir = out["directory"].get<std::string>();
        if (out.contains("w_grid_points"))
            cfg.w_grid_points = as_int(out["w_grid_points"], "output.w_grid_points");
        if (out.contains("w_grid_halfwidth_factor"))
            cfg.w_grid_halfwidth_factor =
                as_number(out["w_grid_halfwidth_factor"], "output.w_grid_halfwidth_factor");
        if (out.contains("peak_window_halfwidth_ueV"))
            cfg.peak_window_halfwidth_ueV =
                as_number(out["peak_window_halfwidth_ueV"], "output.peak_window_halfwidth_ueV");
        if (out.contains("coherence_threshold"))
            cfg.coherence_threshold =
                as_number(out["coherence_threshold"], "output.coherence_threshold");
    }

    if (doc.contains("jarzynski")) {
        const json& jz = doc["jarzynski"];
        check_keys(jz, {"t_cold_mK", "t_hot_mK", "search_range_mK", "curve_samples"}, "jarzynski");
        JarzynskiStage stage;
        if (jz.contains("t_cold_mK"))
            stage.t_cold_mK = as_number(jz["t_cold_mK"], "jarzynski.t_cold_mK");
        if (jz.contains("t_hot_mK"))
            stage.t_hot_mK = as_number(jz["t_hot_mK"], "jarzynski.t_hot_mK");
        if (jz.contains("search_range_mK")) {
            const json& range = jz["search_range_mK"];
            if (!range.is_array() || range.size() != 2)
                throw ConfigError("config: jarzynski.search_range_mK must be [low, high]");
            stage.search_low_mK = as_number(range[0], "search_range_mK[0]");
            stage.search_high_mK = as_number(range[1], "search_range_mK[1]");
        }
        if (jz.contains("curve_samples"))
            stage.curve_samples = as_int(jz["curve_samples"], "jarzynski.curve_samples");
        cfg.jarzynski = stage;
    }

    cfg.validate();
    return cfg;
}

} // namespace

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
    if (hbar_omega_ueV <= 0.0)
        fail("level splitting must be positive");
    if (drive != "sqrt_x" && drive != "identity" && drive != "pauli_x")
        fail("drive must be sqrt_x, identity, or pauli_x");
    if (preparation == Preparation::Thermal &&
        (preparation_temperature_mK == 0.0 || std::isnan(preparation_temperature_mK)))
        fail("thermal preparation temperature must be nonzero");
    if (ancilla_excited_population < 0.0 || ancilla_excited_population > 1.0)
        fail("ancilla excited population must lie in [0, 1]");
    if (correct_ancilla_damping && std::abs(1.0 - 2.0 * ancilla_excited_population) < 1e-9)
        fail("damping correction is singular at ancilla population 1/2");
    if (sweep_points < 2)
        fail("sweep.points must be at least 2");
    if (delta_u <= 0.0)
        fail("sweep.delta_u must be positive");
    if (mode == RunMode::Shots && shots < 1)
        fail("mode.shots must be at least 1");
    if (w_grid_points < 2)
        fail("output.w_grid_points must be at least 2");
    if (w_grid_halfwidth_factor <= 0.0)
        fail("output.w_grid_halfwidth_factor must be positive");
    if (peak_window_halfwidth_ueV <= 0.0)
        fail("output.peak_window_halfwidth_ueV must be positive");
    if (peak_window_halfwidth_ueV > (w_grid_halfwidth_factor - 1.0) * hbar_omega_ueV)
        fail("peak windows at +-hbar_omega would extend outside the work grid");
    if (2.0 * peak_window_halfwidth_ueV > hbar_omega_ueV)
        fail("peak windows at 0 and +-hbar_omega would overlap");
    if (coherence_threshold <= 0.0 || coherence_threshold >= 1.0)
        fail("output.coherence_threshold must lie in (0, 1)");
    try {
        if (bath)
            bath->validate();
        if (noise_enabled)
            noise.validate();
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    if (bath && 1 + bath->num_spectators() + 1 > max_register_qubits)
        fail("register (system + spectators + ancilla) exceeds capacity");
    if (jarzynski) {
        if (jarzynski->t_cold_mK == 0.0 || jarzynski->t_hot_mK == 0.0)
            fail("jarzynski preparation temperatures must be nonzero");
        if (!(jarzynski->search_low_mK < jarzynski->search_high_mK))
            fail("jarzynski search range must have low < high");
        if (jarzynski->curve_samples < 3)
            fail("jarzynski.curve_samples must be at least 3");
    }
}

// --------------------------- loading -------------------------------------------

ExperimentConfig load_config_string(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text, nullptr, /*allow_exceptions=*/true,
                          /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    return parse_config(doc);
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_config_string(buf.str());
}

// --------------------------- presets -------------------------------------------

namespace {

struct PresetEntry {
    const char* description;
    const char* json_text;
};

const std::map<std::string, PresetEntry>& preset_registry() {
    static const std::map<std::string, PresetEntry> registry = {
        {"fig2a-closed-ideal",
         {"Closed qubit, ground preparation, ideal sweep: two half-weight work peaks.",
          R"JSON({
  // Closed two-level system driven by sqrt(X), ground-state preparation,
  // noise-free exact sweep. The reconstruction shows two peaks of weight
  // ~1/2 at w = 0 and w = +20.04 ueV (and nothing at -20.04 ueV).
  "scenario": "fig2a-closed-ideal",
  "system": {
    "frequency_GHz": 4.85,          // 4.85 GHz transmon-like qubit
    "level_splitting_ueV": 20.04,   // canonical splitting; wins over frequency
    "drive": "sqrt_x",
    "preparation": "ground"
  },
  "sweep": { "points": 900, "delta_u": 0.013 },
  "mode": "exact",
  "seed": 12345,
  "output": { "directory": "out/fig2a-closed-ideal" }
})JSON"}},
        {"fig2a-inset-coherent",
         {"Closed qubit prepared in (|0>+|1>)/sqrt(2): antisymmetric wings flag coherence.",
          R"JSON({
  // Same closed system, but the qubit starts in the coherent superposition
  // (|0> + |1>)/sqrt(2). The reconstructed density develops antisymmetric
  // 1/x-shaped wings around the peaks and the coherence verdict flips.
  "scenario": "fig2a-inset-coherent",
  "system": {
    "level_splitting_ueV": 20.04,
    "drive": "sqrt_x",
    "preparation": "coherent_plus"
  },
  "sweep": { "points": 900, "delta_u": 0.013 },
  "mode": "exact",
  "seed": 12345,
  "output": { "directory": "out/fig2a-inset-coherent" }
})JSON"}},
        {"fig2b-open-bath",
         {"Thermal qubit exchanging excitations with a warm spectator: third work peak.",
          R"JSON({
  // Open system: the qubit (thermal at 67 mK) exchanges excitations with a
  // resonant spectator qubit held at 150 mK (weak coupling, g/omega = 0.02).
  // Work values of -20.04 ueV become available through bath excitations, so
  // a third peak grows at negative work, well above the closed baseline.
  "scenario": "fig2b-open-bath",
  "system": {
    "level_splitting_ueV": 20.04,
    "drive": "sqrt_x",
    "preparation": { "thermal_mK": 67.0 }
  },
  "sweep": { "points": 900, "delta_u": 0.013 },
  "mode": "exact",
  "seed": 12345,
  "bath": {
    "spectator_freqs_ueV": [20.04],
    "couplings_ueV": [0.4],
    "temperature_mK": 150.0,
    // Joint thermal preparation is projected onto the coupled-Hamiltonian
    // eigenbasis so the initial state commutes with it (weak-coupling
    // equilibrium); without this the preparation carries artificial
    // coherence in the coupled basis.
    "dephase_initial_state": true
  },
  "output": { "directory": "out/fig2b-open-bath" }
})JSON"}},
        {"fig3-jarzynski-sweep",
         {"Bath thermometry: J(T) curve over mixed preparations, root near the bath temperature.",
          R"JSON({
  // Bath thermometry. Two system preparations (83 mK and -87 mK, the latter
  // population-inverted) are swept against the same 150 mK spectator bath;
  // their reconstructed work PDFs are mixed with weight r, each mixture is
  // assigned its effective temperature, and the Jarzynski integral J(T) is
  // sampled along the curve. The root of J(T) = 1 estimates the bath
  // temperature.
  "scenario": "fig3-jarzynski-sweep",
  "system": {
    "level_splitting_ueV": 20.04,
    "drive": "sqrt_x",
    "preparation": { "thermal_mK": 83.0 }
  },
  "sweep": { "points": 900, "delta_u": 0.013 },
  "mode": "exact",
  "seed": 12345,
  "bath": {
    "spectator_freqs_ueV": [20.04],
    "couplings_ueV": [0.4],
    "temperature_mK": 150.0,
    "dephase_initial_state": true
  },
  "jarzynski": {
    "t_cold_mK": 83.0,
    "t_hot_mK": -87.0,
    "search_range_mK": [50.0, 400.0],
    "curve_samples": 129
  },
  "output": { "directory": "out/fig3-jarzynski-sweep" }
})JSON"}},
        {"fig4-noisy-emulation",
         {"Closed qubit under depolarizing + relaxation + readout noise: damped, lossy PDF.",
          R"JSON({
  // Noisy-processor emulation: depolarizing error after every gate, thermal
  // relaxation over each gate's wall-clock duration, readout confusion with
  // inverse-confusion correction, and a thermally occupied ancilla. The
  // reconstructed PDF keeps its peak structure but its total mass drops
  // visibly below 1.
  "scenario": "fig4-noisy-emulation",
  "system": {
    "level_splitting_ueV": 20.04,
    "drive": "sqrt_x",
    "preparation": { "thermal_mK": 10.7 }
  },
  "ancilla": { "excited_population": 0.01, "correct_damping": false },
  "sweep": { "points": 900, "delta_u": 0.013 },
  "mode": { "shots": 1024 },
  "seed": 12345,
  "noise": {
    "one_qubit_gate_duration_us": 0.05,
    "controlled_gate_duration_us": 0.5,
    "qubits": [
      { // system qubit
        "depol_one_qubit": 0.001,
        "depol_controlled": 0.015,
        "t1_us": 100.0,
        "t2_us": 70.0,
        "equilibrium_excited_population": 0.02
      },
      { // ancilla qubit
        "depol_one_qubit": 0.001,
        "depol_controlled": 0.015,
        "t1_us": 100.0,
        "t2_us": 70.0,
        "equilibrium_excited_population": 0.02,
        "confusion": [[0.98, 0.02], [0.03, 0.97]]
      }
    ]
  },
  "output": { "directory": "out/fig4-noisy-emulation" }
})JSON"}},
    };
    return registry;
}

} // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, entry] : preset_registry())
        names.push_back(name);
    return names;
}

std::string preset_description(const std::string& name) {
    const auto& reg = preset_registry();
    const auto it = reg.find(name);
    if (it == reg.end())
        throw ConfigError("config: unknown preset \"" + name + "\"");
    return it->second.description;
}

std::string preset_json(const std::string& name) {
    const auto& reg = preset_registry();
    const auto it = reg.find(name);
    if (it == reg.end())
        throw ConfigError("config: unknown preset \"" + name + "\"");
    return it->second.json_text;
}

ExperimentConfig load_preset(const std::string& name) {
    return load_config_string(preset_json(name));
}

ExperimentConfig resolve_config(const std::string& path_or_preset) {
    if (std::filesystem::exists(path_or_preset))
        return load_config_file(path_or_preset);
    const auto& reg = preset_registry();
    if (reg.count(path_or_preset))
        return load_preset(path_or_preset);
    throw ConfigError("config: \"" + path_or_preset +
                      "\" is neither a readable file nor a known preset (see list-scenarios)");
}

} // namespace qwork
