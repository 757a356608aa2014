// work.hpp — Work statistics of a driven quantum system: two-point-measurement
// work PDF, quasi-probability matrix, characteristic-function sweeps through
// the interferometric circuit, and half-inverse-Fourier reconstruction of the
// work PDF from the sampled characteristic function.

#pragma once

#include "qwork/circuit.hpp"
#include "qwork/linalg.hpp"
#include "qwork/noise.hpp"

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

namespace qwork {

// --------------------------- distributions -----------------------------------

// Exact work PDF of a finite system: delta peaks at energy differences.
struct DeltaComb {
    // (work value w in ueV, weight) sorted by w; nearby w merged on build.
    std::vector<std::pair<double, double>> points;

    double total_weight() const;
    bool is_normalized(double tol = 1e-9) const;
};

// Reconstructed work density on a uniform grid (density per ueV).
struct GridDensity {
    std::vector<double> w;       // strictly increasing, uniform spacing
    std::vector<double> density;

    double spacing() const;
    double total_mass() const;   // trapezoidal integral over the full grid
    void validate() const;
};

using WorkDistribution = std::variant<DeltaComb, GridDensity>;

// Sorts, validates, and merges points closer than merge_tol (weights added).
DeltaComb make_delta_comb(std::vector<std::pair<double, double>> points,
                          double merge_tol = 1e-9);

// --------------------------- quasi-probabilities ------------------------------

// Complex quasi-probability q_mn = <m|U|n><n|rho U^dag|m> over the energy
// eigenbasis {|n>} of the (cyclic) Hamiltonian; row m = final, column n =
// initial. Sums to 1; both marginals are proper probability distributions;
// equals the TPM joint distribution whenever [rho, H0] = 0.
struct QuasiProbMatrix {
    Matrix entries;
    Eigen::VectorXd energies; // ascending eigenvalues of H0 (ueV)

    void validate(double tol = 1e-9) const;
};

// --------------------------- sampled characteristic function ------------------

struct CharFnSamples {
    std::vector<double> u;        // uniform grid from 0 (1/ueV)
    std::vector<Complex> values;  // g(u) estimates
    int shots = 0;                // 0 = exact expectations
    std::uint64_t seed = 0;

    double spacing() const;
    void validate() const;
};

// --------------------------- core operations ----------------------------------

// Exact TPM work PDF: initial energy measurement (populations of rho in the H0
// eigenbasis), drive, final energy measurement. Weight of w = E_m - E_n is
// <n|rho|n> * |<m|U|n>|^2; coinciding work values are merged.
DeltaComb tpm_work_pdf(const QuantumState& rho, const HermitianOperator& h0,
                       const Matrix& u_drive);

// Full quasi-probability matrix q_mn (complex in general).
QuasiProbMatrix quasiprob(const QuantumState& rho, const HermitianOperator& h0,
                          const Matrix& u_drive);

// Analytic characteristic function g(u) = Tr[U^dag e^{+iuH0} U e^{-iuH0} rho].
// Negative u is allowed here; this is the reference oracle for the circuit.
Complex char_fn_direct(const QuantumState& rho, const HermitianOperator& h0,
                       const Matrix& u_drive, double u);

// System under sweep: Hamiltonian and initial state on the system(+bath)
// register, a 2x2 drive on the system qubit, and the ancilla preparation.
struct SweepSystem {
    HermitianOperator h0;  // system(+bath) Hamiltonian, ueV
    Matrix drive;          // 2x2 unitary on the system qubit
    Matrix rho_sb;         // initial system(+bath) density matrix
    double ancilla_excited_population = 0.0; // thermal ancilla preparation
};

struct SweepMode {
    int shots = 0;          // 0 = exact expectations
    std::uint64_t seed = 0; // master seed for shot sampling
};

// Samples g(u_j) on u_j = j * delta_u, j = 0..num_points-1, by building and
// executing the interferometric circuit twice per point (sigma_z and sigma_y
// readout). Points are evaluated on a worker pool; per-point seeds are derived
// from (seed, j, basis), so results are bit-identical for any worker count.
CharFnSamples sweep_char_fn_points(const SweepSystem& sys, int num_points, double delta_u,
                                   const SweepMode& mode, const NoiseModel* noise = nullptr);

// Range-based convenience wrapper: num_points = floor(u_max/delta_u) + 1.
CharFnSamples sweep_char_fn(const SweepSystem& sys, double u_max, double delta_u,
                            const SweepMode& mode, const NoiseModel* noise = nullptr);

// Half-inverse-Fourier reconstruction: the u >= 0 inverse transform
//   q_>(w) ~ (delta_u / 2 pi) * sum_j e^{-i u_j w} g(u_j)
// by the rectangle rule with the j = 0 term half-weighted; returns twice its
// real part on the given grid, which recovers the work PDF when the initial
// state carries no energy-basis coherence. No window is applied by default
// (truncation ringing left visible); hann_window = true tapers the record
// with a half-Hann window for ringing-suppression studies.
GridDensity half_inverse_fourier(const CharFnSamples& samples, const std::vector<double>& w_grid,
                                 bool hann_window = false);

// Uniform grid helper for the reconstruction, [w_min, w_max] inclusive.
std::vector<double> make_w_grid(double w_min, double w_max, int num_points);

// Trapezoid-integrated density over [pos - half_width, pos + half_width] for
// each expected peak position. Windows must lie inside the grid and must not
// overlap.
std::vector<std::pair<double, double>> extract_peaks(const GridDensity& dist,
                                                     const std::vector<double>& positions,
                                                     double half_width);

// Verdict on initial-state coherence from the reconstruction's shape: around
// each peak the density is split into even and odd parts; the score of a
// window is its odd-part energy normalized by the largest total window energy
// (global normalization keeps empty windows, which contain only truncation
// ringing, from scoring high). Coherent preparations produce antisymmetric
// 1/x-shaped wings and large scores.
struct CoherenceReport {
    bool symmetric = true;
    double asymmetry_score = 0.0;        // max over windows
    std::vector<double> window_scores;   // one per expected position
    double threshold = 0.1;
};

CoherenceReport detect_coherence_signature(const GridDensity& dist,
                                           const std::vector<double>& positions,
                                           double half_width, double threshold = 0.1);

} // namespace qwork
