// experiment.cpp — End-to-end scenario pipeline and circuit export.

#include "qwork/experiment.hpp"

#include "qwork/csv.hpp"
#include "qwork/qasm.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace qwork {

namespace {

namespace fs = std::filesystem;

// Rethrow any non-config failure with the pipeline stage attached; config
// errors keep their type so the CLI can map them to the right exit code.
template <typename F>
auto with_stage(const char* label, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("stage ") + label + ": " + e.what());
    }
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

Matrix two_level_hamiltonian(double splitting_ueV) {
    return -0.5 * splitting_ueV * sigma_z();
}

Matrix qubit_thermal_matrix(double splitting_ueV, double temperature_mK) {
    const HermitianOperator h(two_level_hamiltonian(splitting_ueV));
    return thermal_state(h, Temperature(temperature_mK)).matrix();
}

Matrix system_state(const ExperimentConfig& cfg, std::optional<double> thermal_override_mK) {
    if (thermal_override_mK)
        return qubit_thermal_matrix(cfg.hbar_omega_ueV, *thermal_override_mK);
    switch (cfg.preparation) {
    case Preparation::Ground:
        return ket_bra(0);
    case Preparation::Excited:
        return ket_bra(1);
    case Preparation::CoherentPlus: {
        Matrix plus(2, 2); // |+><+| with |+> = (|0> + |1>)/sqrt(2)
        plus << 0.5, 0.5, 0.5, 0.5;
        return plus;
    }
    case Preparation::Thermal:
        return qubit_thermal_matrix(cfg.hbar_omega_ueV, cfg.preparation_temperature_mK);
    }
    throw std::logic_error("unreachable preparation kind");
}

SweepSystem assemble(const ExperimentConfig& cfg, std::optional<double> thermal_override_mK) {
    const Matrix drive = drive_matrix(cfg.drive);
    const Matrix rho_s = system_state(cfg, thermal_override_mK);

    if (!cfg.bath || cfg.bath->num_spectators() == 0) {
        return SweepSystem{HermitianOperator(two_level_hamiltonian(cfg.hbar_omega_ueV)), drive,
                           rho_s, cfg.ancilla_excited_population};
    }

    const BathSpec& bath = *cfg.bath;
    HermitianOperator h0 = build_bath_hamiltonian(cfg.hbar_omega_ueV, bath);

    std::vector<Matrix> factors;
    factors.push_back(rho_s);
    for (double wk : bath.spectator_freqs_ueV)
        factors.push_back(qubit_thermal_matrix(wk, bath.temperature_mK));
    Matrix rho_sb = tensor_product(factors);

    if (cfg.dephase_initial_state) {
        // The joint product preparation does not commute with the coupled
        // Hamiltonian; project it onto the coupled eigenbasis so the initial
        // state is a genuine weak-coupling equilibrium preparation.
        QuantumState joint(rho_sb, system_bath_roles(cfg));
        rho_sb = dephase_in_eigenbasis(joint, h0).matrix();
    }
    return SweepSystem{std::move(h0), drive, std::move(rho_sb), cfg.ancilla_excited_population};
}

Matrix padded_drive(const SweepSystem& sys) {
    const auto dim = sys.h0.dim();
    if (dim == 2)
        return sys.drive;
    return tensor_product(sys.drive, identity(dim / 2));
}

CharFnSamples sweep_with_correction(const ExperimentConfig& cfg, const SweepSystem& sys,
                                    const SweepMode& mode, const NoiseModel* noise) {
    CharFnSamples samples = sweep_char_fn_points(sys, cfg.sweep_points, cfg.delta_u, mode, noise);
    if (cfg.correct_ancilla_damping) {
        const double factor = 1.0 - 2.0 * cfg.ancilla_excited_population;
        for (Complex& g : samples.values)
            g /= factor;
    }
    return samples;
}

std::vector<double> peak_positions(const ExperimentConfig& cfg) {
    return {-cfg.hbar_omega_ueV, 0.0, cfg.hbar_omega_ueV};
}

void write_report_file(const ScenarioReport& rep) {
    const ExperimentConfig& cfg = rep.config;
    std::ostringstream out;
    out << "scenario: " << cfg.scenario << "\n";
    out << "level splitting: " << fmt(cfg.hbar_omega_ueV) << " ueV\n";
    out << "drive: " << cfg.drive << "\n";

    out << "preparation: ";
    switch (cfg.preparation) {
    case Preparation::Ground:
        out << "ground";
        break;
    case Preparation::Excited:
        out << "excited";
        break;
    case Preparation::CoherentPlus:
        out << "coherent (|0>+|1>)/sqrt(2)";
        break;
    case Preparation::Thermal:
        out << "thermal at " << fmt(cfg.preparation_temperature_mK) << " mK";
        break;
    }
    out << "\n";

    if (cfg.bath) {
        out << "bath: " << cfg.bath->num_spectators() << " spectator(s) at";
        for (double wk : cfg.bath->spectator_freqs_ueV)
            out << " " << fmt(wk);
        out << " ueV, couplings";
        for (double gk : cfg.bath->couplings_ueV)
            out << " " << fmt(gk);
        out << " ueV, temperature " << fmt(cfg.bath->temperature_mK) << " mK, "
            << (cfg.dephase_initial_state ? "eigenbasis-dephased preparation"
                                          : "raw product preparation")
            << "\n";
    } else {
        out << "bath: none (closed system)\n";
    }

    out << "sweep: " << cfg.sweep_points << " points, delta_u = " << fmt(cfg.delta_u)
        << " (1/ueV), u_max = " << fmt(cfg.u_max()) << "\n";
    if (cfg.mode == RunMode::Exact)
        out << "mode: exact expectations\n";
    else
        out << "mode: " << cfg.shots << " shots per point and basis, seed " << cfg.seed << "\n";
    out << "noise: " << (cfg.noise_enabled ? "attached" : "none") << "\n";

    out << "ancilla excited population: " << fmt(cfg.ancilla_excited_population)
        << " (damping factor " << fmt(rep.ancilla_damping_factor) << ", "
        << (cfg.correct_ancilla_damping ? "corrected" : "not corrected") << ")\n";

    out << "work grid: [" << fmt(rep.density.w.front()) << ", " << fmt(rep.density.w.back())
        << "] ueV, " << rep.density.w.size() << " points\n";
    out << "total reconstructed mass: " << fmt(rep.total_mass) << "\n";

    out << "peak weights (windows +-" << fmt(cfg.peak_window_halfwidth_ueV) << " ueV):\n";
    for (const PeakEntry& p : rep.peaks)
        out << "  w = " << fmt(p.position_ueV) << " ueV : " << fmt(p.weight) << "\n";

    out << "coherence verdict: " << (rep.coherence.symmetric ? "symmetric" : "asymmetric")
        << " (max window score " << fmt(rep.coherence.asymmetry_score) << ", threshold "
        << fmt(rep.coherence.threshold) << ")\n";
    out << "window scores:";
    for (double s : rep.coherence.window_scores)
        out << " " << fmt(s);
    out << "\n";

    out << "reference two-point-measurement peaks:\n";
    for (const auto& [w, weight] : rep.reference_comb.points)
        out << "  w = " << fmt(w) << " ueV : " << fmt(weight) << "\n";

    if (rep.jarzynski) {
        const JarzynskiStageReport& jz = *rep.jarzynski;
        out << "bath thermometry: root T = " << fmt(jz.solve.root.mK) << " mK, bracket ["
            << fmt(jz.solve.bracket_mK.first) << ", " << fmt(jz.solve.bracket_mK.second)
            << "] mK, " << jz.solve.bisection_iterations << " bisection iterations, curve "
            << jz.solve.curve.size() << " points, "
            << (jz.solve.monotone ? "monotone" : "non-monotone") << "\n";
        out << "  preparations: " << fmt(jz.t_cold.mK) << " mK and " << fmt(jz.t_hot.mK)
            << " mK\n";
        for (const std::string& d : jz.solve.diagnostics)
            out << "  diagnostic: " << d << "\n";
    }

    out << "files:\n";
    out << "  " << rep.char_fn_csv.string() << "\n";
    out << "  " << rep.density_csv.string() << "\n";
    out << "  " << rep.reference_comb_csv.string() << "\n";
    if (rep.jarzynski) {
        out << "  " << rep.jarzynski->jcurve_csv.string() << "\n";
        out << "  " << rep.jarzynski->cold_density_csv.string() << "\n";
        out << "  " << rep.jarzynski->hot_density_csv.string() << "\n";
        out << "  " << rep.jarzynski->root_report_path.string() << "\n";
    }

    for (const std::string& w : rep.warnings)
        out << "note: " << w << "\n";

    std::ofstream file(rep.report_path);
    if (!file)
        throw std::runtime_error("cannot write " + rep.report_path.string());
    file << out.str();
}

ScenarioReport run_pipeline(const ExperimentConfig& cfg, bool force_noise) {
    with_stage("config", [&] { cfg.validate(); });

    const NoiseModel* noise = (force_noise || cfg.noise_enabled) ? &cfg.noise : nullptr;

    ScenarioReport rep;
    rep.config = cfg;
    rep.ancilla_damping_factor = 1.0 - 2.0 * cfg.ancilla_excited_population;

    const SweepSystem sys = with_stage("assemble", [&] { return assemble(cfg, std::nullopt); });

    const SweepMode mode{cfg.mode == RunMode::Shots ? cfg.shots : 0, cfg.seed};
    rep.samples =
        with_stage("sweep", [&] { return sweep_with_correction(cfg, sys, mode, noise); });

    const double half_span = cfg.w_grid_halfwidth_factor * cfg.hbar_omega_ueV;
    const std::vector<double> w_grid = make_w_grid(-half_span, half_span, cfg.w_grid_points);
    rep.density =
        with_stage("reconstruction", [&] { return half_inverse_fourier(rep.samples, w_grid); });
    rep.total_mass = rep.density.total_mass();

    const std::vector<double> positions = peak_positions(cfg);
    with_stage("analysis", [&] {
        const auto peaks =
            extract_peaks(rep.density, positions, cfg.peak_window_halfwidth_ueV);
        for (const auto& [pos, weight] : peaks)
            rep.peaks.push_back(PeakEntry{pos, weight});
        rep.coherence = detect_coherence_signature(rep.density, positions,
                                                   cfg.peak_window_halfwidth_ueV,
                                                   cfg.coherence_threshold);
        rep.reference_comb = tpm_work_pdf(QuantumState(sys.rho_sb, system_bath_roles(cfg)),
                                          sys.h0, padded_drive(sys));
    });

    const fs::path out_dir(cfg.out_dir);
    rep.char_fn_csv = out_dir / "char_fn.csv";
    rep.density_csv = out_dir / "density.csv";
    rep.reference_comb_csv = out_dir / "reference_comb.csv";
    rep.report_path = out_dir / "report.txt";

    if (cfg.bath)
        rep.warnings = cfg.bath->warnings();
    if (cfg.w_grid_points == ExperimentConfig{}.w_grid_points)
        rep.warnings.push_back(
            "work-grid resolution is the module default (not externally calibrated)");
    if (cfg.mode == RunMode::Shots)
        rep.warnings.push_back("shot-sampled characteristic function: peak weights and the "
                               "coherence score carry statistical noise");

    // Optional bath-thermometry stage: sweep a second (hot) preparation,
    // reconstruct both PDFs on the same grid, and locate J(T) = 1 along the
    // mixing curve.
    if (cfg.jarzynski) {
        const JarzynskiStage& stage = *cfg.jarzynski;
        with_stage("jarzynski", [&] {
            const bool reuse_main = cfg.preparation == Preparation::Thermal &&
                                    std::abs(cfg.preparation_temperature_mK - stage.t_cold_mK) <
                                        1e-12 &&
                                    !cfg.correct_ancilla_damping;

            GridDensity cold;
            fs::path cold_csv;
            if (reuse_main) {
                cold = rep.density;
                cold_csv = rep.density_csv;
            } else {
                const SweepSystem cold_sys = assemble(cfg, stage.t_cold_mK);
                const SweepMode cold_mode{mode.shots, derive_seed(cfg.seed, 7001, 0)};
                const CharFnSamples cold_samples =
                    sweep_with_correction(cfg, cold_sys, cold_mode, noise);
                cold = half_inverse_fourier(cold_samples, w_grid);
                cold_csv = out_dir / "jarzynski_cold_density.csv";
                write_density_csv(cold_csv, cold);
            }

            const SweepSystem hot_sys = assemble(cfg, stage.t_hot_mK);
            const SweepMode hot_mode{mode.shots, derive_seed(cfg.seed, 7001, 1)};
            const CharFnSamples hot_samples =
                sweep_with_correction(cfg, hot_sys, hot_mode, noise);
            const GridDensity hot = half_inverse_fourier(hot_samples, w_grid);
            const fs::path hot_csv = out_dir / "jarzynski_hot_density.csv";

            const Temperature t_cold(stage.t_cold_mK);
            const Temperature t_hot(stage.t_hot_mK);
            const double omega = cfg.hbar_omega_ueV;
            const CurveBuilder builder = [&cold, &hot, t_cold, t_hot, omega](double r) {
                return mix_pdfs(MixedPdfSpec{cold, hot, r, t_cold, t_hot, omega});
            };

            BathTemperatureResult solve = solve_bath_temperature(
                builder, Temperature(stage.search_low_mK), Temperature(stage.search_high_mK),
                stage.curve_samples);

            const fs::path jcurve_csv = out_dir / "jcurve.csv";
            const fs::path root_txt = out_dir / "jarzynski_root.txt";
            fs::create_directories(out_dir);
            write_density_csv(hot_csv, hot);
            write_jcurve_csv(jcurve_csv, solve.curve);

            std::ofstream root_file(root_txt);
            if (!root_file)
                throw std::runtime_error("cannot write " + root_txt.string());
            root_file << "root_mK = " << fmt(solve.root.mK) << "\n"
                      << "bracket_mK = [" << fmt(solve.bracket_mK.first) << ", "
                      << fmt(solve.bracket_mK.second) << "]\n"
                      << "iterations = " << solve.bisection_iterations << "\n"
                      << "monotone = " << (solve.monotone ? "true" : "false") << "\n"
                      << "curve_csv = " << jcurve_csv.string() << "\n";

            rep.jarzynski = JarzynskiStageReport{std::move(solve), t_cold, t_hot, jcurve_csv,
                                                 cold_csv, hot_csv, root_txt};
        });
    }

    with_stage("output", [&] {
        fs::create_directories(out_dir);
        write_char_fn_csv(rep.char_fn_csv, rep.samples);
        write_density_csv(rep.density_csv, rep.density);
        write_comb_csv(rep.reference_comb_csv, rep.reference_comb);
        write_report_file(rep);
    });

    return rep;
}

} // namespace

Matrix drive_matrix(const std::string& name) {
    if (name == "sqrt_x")
        return sqrt_x();
    if (name == "identity")
        return identity(2);
    if (name == "pauli_x")
        return sigma_x();
    throw ConfigError("config: unknown drive \"" + name + "\"");
}

Matrix initial_system_state(const ExperimentConfig& config) {
    return system_state(config, std::nullopt);
}

std::vector<QubitRole> system_bath_roles(const ExperimentConfig& config) {
    std::vector<QubitRole> roles{QubitRole::System};
    if (config.bath)
        roles.insert(roles.end(), static_cast<std::size_t>(config.bath->num_spectators()),
                     QubitRole::Bath);
    return roles;
}

SweepSystem build_sweep_system(const ExperimentConfig& config) {
    return assemble(config, std::nullopt);
}

SweepSystem build_sweep_system(const ExperimentConfig& config,
                               std::optional<double> preparation_mK_override) {
    return assemble(config, preparation_mK_override);
}

ScenarioReport run_scenario(const ExperimentConfig& config) {
    return run_pipeline(config, /*force_noise=*/false);
}

ScenarioReport run_noisy_emulation(const ExperimentConfig& config) {
    return run_pipeline(config, /*force_noise=*/true);
}

std::vector<std::filesystem::path> export_circuits(const ExperimentConfig& config,
                                                   const std::filesystem::path& directory) {
    config.validate();
    const SweepSystem sys = build_sweep_system(config);

    int width = 4;
    for (int n = config.sweep_points - 1; n >= 10000; n /= 10)
        ++width;

    fs::create_directories(directory);
    std::vector<fs::path> written;
    for (int j = 0; j < config.sweep_points; ++j) {
        const double u = j * config.delta_u;
        const CircuitSpec circuit =
            build_interferometric_circuit(sys.h0, sys.drive, u, MeasBasis::Z);

        std::ostringstream header;
        header << "interferometric characteristic-function circuit\n";
        header << "scenario: " << config.scenario << "; sweep point " << j << " of "
               << config.sweep_points << "\n";
        header << "the sigma_y readout variant appends sdg + h on the ancilla before "
                  "measurement";

        char name[32];
        std::snprintf(name, sizeof(name), "sweep_%0*d.qasm", width, j);
        const fs::path path = directory / name;
        std::ofstream file(path);
        if (!file)
            throw std::runtime_error("cannot write " + path.string());
        file << to_qasm3(circuit, header.str());
        written.push_back(path);
    }
    return written;
}

} // namespace qwork
