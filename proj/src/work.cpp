// work.cpp — TPM work PDF, quasi-probabilities, characteristic-function
// sweeps, and half-inverse-Fourier reconstruction.

#include "qwork/work.hpp"
#include "qwork/constants.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <thread>

namespace qwork {

// --------------------------- parallel helper ----------------------------------

namespace {

// Static-chunked parallel loop. Each index writes only its own outputs, so the
// result is identical for any worker count, including 1.
void parallel_for(int n, const std::function<void(int)>& body) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(n)));
    if (workers <= 1) {
        for (int i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                body(i);
        });
    for (std::thread& th : pool)
        th.join();
}

} // namespace

// --------------------------- distributions -----------------------------------

double DeltaComb::total_weight() const {
    double s = 0.0;
    for (const auto& [w, p] : points)
        s += p;
    return s;
}

bool DeltaComb::is_normalized(double tol) const {
    if (std::abs(total_weight() - 1.0) > tol)
        return false;
    for (const auto& [w, p] : points)
        if (p < -1e-12)
            return false;
    return true;
}

DeltaComb make_delta_comb(std::vector<std::pair<double, double>> points, double merge_tol) {
    std::sort(points.begin(), points.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    DeltaComb comb;
    for (const auto& [w, p] : points) {
        if (!comb.points.empty() && w - comb.points.back().first <= merge_tol)
            comb.points.back().second += p;
        else
            comb.points.emplace_back(w, p);
    }
    return comb;
}

double GridDensity::spacing() const {
    if (w.size() < 2)
        throw std::invalid_argument("GridDensity: need at least two grid points");
    return w[1] - w[0];
}

double GridDensity::total_mass() const {
    validate();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        s += 0.5 * (density[i] + density[i + 1]);
    return s * spacing();
}

void GridDensity::validate() const {
    if (w.size() < 2 || w.size() != density.size())
        throw std::invalid_argument("GridDensity: grid and density sizes must match (>= 2)");
    const double dw = w[1] - w[0];
    if (dw <= 0.0)
        throw std::invalid_argument("GridDensity: grid must be strictly increasing");
    for (std::size_t i = 1; i < w.size(); ++i) {
        const double step = w[i] - w[i - 1];
        if (step <= 0.0 || std::abs(step - dw) > 1e-9 * std::max(1.0, std::abs(dw)))
            throw std::invalid_argument("GridDensity: grid spacing must be uniform");
    }
}

// --------------------------- quasi-probabilities ------------------------------

void QuasiProbMatrix::validate(double tol) const {
    const Eigen::Index d = entries.rows();
    if (entries.cols() != d || energies.size() != d)
        throw std::invalid_argument("QuasiProbMatrix: shape mismatch");
    if (std::abs(entries.sum() - Complex(1.0, 0.0)) > tol)
        throw std::invalid_argument("QuasiProbMatrix: entries must sum to 1");
    for (Eigen::Index m = 0; m < d; ++m) {
        const Complex row = entries.row(m).sum();
        if (std::abs(row.imag()) > tol || row.real() < -tol)
            throw std::invalid_argument("QuasiProbMatrix: final-state marginal not a distribution");
    }
    for (Eigen::Index n = 0; n < d; ++n) {
        const Complex col = entries.col(n).sum();
        if (std::abs(col.imag()) > tol || col.real() < -tol)
            throw std::invalid_argument("QuasiProbMatrix: initial-state marginal not a distribution");
    }
}

// --------------------------- sampled characteristic function ------------------

double CharFnSamples::spacing() const {
    if (u.size() < 2)
        throw std::invalid_argument("CharFnSamples: need at least two samples");
    return u[1] - u[0];
}

void CharFnSamples::validate() const {
    if (u.empty() || u.size() != values.size())
        throw std::invalid_argument("CharFnSamples: grid and value sizes must match");
    if (u.front() != 0.0)
        throw std::invalid_argument("CharFnSamples: grid must start at u = 0");
    if (u.size() >= 2) {
        const double du = u[1] - u[0];
        if (du <= 0.0)
            throw std::invalid_argument("CharFnSamples: grid must be increasing");
        for (std::size_t j = 1; j < u.size(); ++j)
            if (std::abs(u[j] - u[j - 1] - du) > 1e-12 * std::max(1.0, du))
                throw std::invalid_argument("CharFnSamples: grid spacing must be uniform");
    }
}

// --------------------------- core operations ----------------------------------

DeltaComb tpm_work_pdf(const QuantumState& rho, const HermitianOperator& h0,
                       const Matrix& u_drive) {
    if (rho.dim() != h0.dim() || u_drive.rows() != h0.dim() || u_drive.cols() != h0.dim())
        throw std::invalid_argument("tpm_work_pdf: dimension mismatch");
    const EighResult ed = eigh(h0);
    const Eigen::Index d = ed.eigenvalues.size();

    // Populations after the first energy measurement and transition
    // probabilities under the drive, both in the H0 eigenbasis.
    const Matrix rho_eig = ed.eigenvectors.adjoint() * rho.matrix() * ed.eigenvectors;
    const Matrix u_eig = ed.eigenvectors.adjoint() * u_drive * ed.eigenvectors;

    std::vector<std::pair<double, double>> points;
    points.reserve(static_cast<std::size_t>(d) * d);
    for (Eigen::Index n = 0; n < d; ++n) {
        const double p_n = rho_eig(n, n).real();
        for (Eigen::Index m = 0; m < d; ++m) {
            const double weight = p_n * std::norm(u_eig(m, n));
            // zero-probability outcomes are not part of the PDF's support
            if (weight > 1e-15)
                points.emplace_back(ed.eigenvalues[m] - ed.eigenvalues[n], weight);
        }
    }
    if (points.empty())
        throw std::runtime_error("tpm_work_pdf: distribution has no support");
    return make_delta_comb(std::move(points));
}

QuasiProbMatrix quasiprob(const QuantumState& rho, const HermitianOperator& h0,
                          const Matrix& u_drive) {
    if (rho.dim() != h0.dim() || u_drive.rows() != h0.dim() || u_drive.cols() != h0.dim())
        throw std::invalid_argument("quasiprob: dimension mismatch");
    const EighResult ed = eigh(h0);
    const Matrix u_eig = ed.eigenvectors.adjoint() * u_drive * ed.eigenvectors;
    const Matrix rho_udag = ed.eigenvectors.adjoint() * (rho.matrix() * u_drive.adjoint()) *
                            ed.eigenvectors;

    const Eigen::Index d = ed.eigenvalues.size();
    QuasiProbMatrix q;
    q.energies = ed.eigenvalues;
    q.entries = Matrix(d, d);
    for (Eigen::Index m = 0; m < d; ++m)
        for (Eigen::Index n = 0; n < d; ++n)
            q.entries(m, n) = u_eig(m, n) * rho_udag(n, m);
    q.validate();
    return q;
}

Complex char_fn_direct(const QuantumState& rho, const HermitianOperator& h0,
                       const Matrix& u_drive, double u) {
    if (rho.dim() != h0.dim() || u_drive.rows() != h0.dim() || u_drive.cols() != h0.dim())
        throw std::invalid_argument("char_fn_direct: dimension mismatch");
    const Matrix forward = matrix_exp_unitary(h0, u);       // e^{-i u H0}
    const Matrix backward = forward.adjoint();              // e^{+i u H0}
    return (u_drive.adjoint() * backward * u_drive * forward * rho.matrix()).trace();
}

namespace {

// Register state = rho_sb (x) ancilla, ancilla thermally occupied with p1.
QuantumState assemble_register(const SweepSystem& sys, int n_sb) {
    Matrix anc = Matrix::Zero(2, 2);
    anc(0, 0) = 1.0 - sys.ancilla_excited_population;
    anc(1, 1) = sys.ancilla_excited_population;
    Matrix full = tensor_product(sys.rho_sb, anc);
    std::vector<QubitRole> roles(n_sb + 1, QubitRole::Bath);
    roles[0] = QubitRole::System;
    roles[n_sb] = QubitRole::Ancilla;
    return QuantumState(std::move(full), std::move(roles));
}

} // namespace

CharFnSamples sweep_char_fn_points(const SweepSystem& sys, int num_points, double delta_u,
                                   const SweepMode& mode, const NoiseModel* noise) {
    if (num_points < 1)
        throw std::invalid_argument("sweep_char_fn_points: need at least one point");
    if (delta_u <= 0.0)
        throw std::invalid_argument("sweep_char_fn_points: delta_u must be positive");
    if (sys.ancilla_excited_population < 0.0 || sys.ancilla_excited_population > 1.0)
        throw std::invalid_argument("sweep_char_fn_points: ancilla population must lie in [0, 1]");

    int n_sb = 0;
    for (Eigen::Index d = sys.h0.dim(); d > 1; d >>= 1)
        ++n_sb;
    const QuantumState initial = assemble_register(sys, n_sb);
    const int ancilla = n_sb;

    Eigen::Matrix2d conf_store = Eigen::Matrix2d::Identity();
    const Eigen::Matrix2d* confusion = nullptr;
    if (noise && mode.shots > 0) {
        conf_store = noise->qubit(ancilla).confusion;
        if ((conf_store - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() > 0.0)
            confusion = &conf_store;
    }

    CharFnSamples out;
    out.shots = mode.shots;
    out.seed = mode.seed;
    out.u.resize(num_points);
    out.values.resize(num_points);

    parallel_for(num_points, [&](int j) {
        const double u = j * delta_u;
        double parts[2];
        for (int b = 0; b < 2; ++b) {
            const MeasBasis basis = b == 0 ? MeasBasis::Z : MeasBasis::Y;
            const CircuitSpec circuit =
                build_interferometric_circuit(sys.h0, sys.drive, u, basis);
            const QuantumState final_state = execute(circuit, initial, noise);
            // The circuit already rotated the readout basis onto sigma_z.
            if (mode.shots == 0) {
                parts[b] = measure_expectation(final_state, ancilla, MeasBasis::Z);
            } else {
                const std::uint64_t seed =
                    derive_seed(mode.seed, static_cast<std::uint64_t>(j),
                                static_cast<std::uint64_t>(b));
                parts[b] = sample_expectation(final_state, ancilla, MeasBasis::Z,
                                              mode.shots, seed, confusion);
            }
        }
        out.u[j] = u;
        out.values[j] = Complex(parts[0], parts[1]);
    });
    return out;
}

CharFnSamples sweep_char_fn(const SweepSystem& sys, double u_max, double delta_u,
                            const SweepMode& mode, const NoiseModel* noise) {
    if (delta_u <= 0.0 || u_max < delta_u)
        throw std::invalid_argument("sweep_char_fn: need u_max >= delta_u > 0");
    const int num_points = static_cast<int>(std::floor(u_max / delta_u)) + 1;
    return sweep_char_fn_points(sys, num_points, delta_u, mode, noise);
}

GridDensity half_inverse_fourier(const CharFnSamples& samples, const std::vector<double>& w_grid,
                                 bool hann_window) {
    samples.validate();
    if (samples.u.size() < 2)
        throw std::invalid_argument("half_inverse_fourier: need at least two samples");
    if (w_grid.size() < 2)
        throw std::invalid_argument("half_inverse_fourier: need at least two grid points");

    const double du = samples.spacing();
    const int nw = static_cast<int>(w_grid.size());
    const int nu = static_cast<int>(samples.u.size());

    // Optional half-Hann taper over the one-sided record: 1 at u = 0 falling
    // to 0 at u_max; trades peak sharpness for suppressed truncation ringing.
    std::vector<Complex> values(samples.values.begin(), samples.values.end());
    if (hann_window) {
        for (int j = 0; j < nu; ++j) {
            const double taper =
                0.5 * (1.0 + std::cos(std::numbers::pi * j / static_cast<double>(nu - 1)));
            values[j] *= taper;
        }
    }

    GridDensity out;
    out.w = w_grid;
    out.density.resize(nw);
    out.validate();

    parallel_for(nw, [&](int i) {
        const double w = w_grid[i];
        // Sequential rectangle-rule sum (j = 0 half-weighted); e^{-i u_j w}
        // advanced by multiplication with the per-step phase.
        const Complex step = std::exp(Complex(0.0, -du * w));
        Complex phase(1.0, 0.0);
        Complex acc = 0.5 * values[0];
        phase *= step;
        for (int j = 1; j < nu; ++j) {
            acc += values[j] * phase;
            phase *= step;
        }
        out.density[i] = 2.0 * (du / (2.0 * std::numbers::pi) * acc).real();
    });
    return out;
}

std::vector<double> make_w_grid(double w_min, double w_max, int num_points) {
    if (num_points < 2 || w_max <= w_min)
        throw std::invalid_argument("make_w_grid: need w_max > w_min and >= 2 points");
    std::vector<double> grid(num_points);
    const double dw = (w_max - w_min) / (num_points - 1);
    for (int i = 0; i < num_points; ++i)
        grid[i] = w_min + i * dw;
    return grid;
}

namespace {

// Index of the grid point nearest to x.
int nearest_index(const std::vector<double>& grid, double x) {
    const auto it = std::lower_bound(grid.begin(), grid.end(), x);
    if (it == grid.begin())
        return 0;
    if (it == grid.end())
        return static_cast<int>(grid.size()) - 1;
    const int hi = static_cast<int>(it - grid.begin());
    return (x - grid[hi - 1] <= grid[hi] - x) ? hi - 1 : hi;
}

void check_windows(const GridDensity& dist, const std::vector<double>& positions,
                   double half_width, const std::string& who) {
    dist.validate();
    if (half_width <= 0.0)
        throw std::invalid_argument(who + ": window half-width must be positive");
    std::vector<double> sorted = positions;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] - half_width < dist.w.front() - 1e-12 ||
            sorted[i] + half_width > dist.w.back() + 1e-12)
            throw std::invalid_argument(who + ": window extends outside the grid");
        if (i > 0 && sorted[i] - half_width < sorted[i - 1] + half_width)
            throw std::invalid_argument(who + ": windows overlap");
    }
}

} // namespace

std::vector<std::pair<double, double>> extract_peaks(const GridDensity& dist,
                                                     const std::vector<double>& positions,
                                                     double half_width) {
    check_windows(dist, positions, half_width, "extract_peaks");
    const double dw = dist.spacing();
    std::vector<std::pair<double, double>> out;
    out.reserve(positions.size());
    for (double pos : positions) {
        const int lo = nearest_index(dist.w, pos - half_width);
        const int hi = nearest_index(dist.w, pos + half_width);
        double weight = 0.0;
        for (int i = lo; i < hi; ++i)
            weight += 0.5 * (dist.density[i] + dist.density[i + 1]) * dw;
        out.emplace_back(pos, weight);
    }
    return out;
}

CoherenceReport detect_coherence_signature(const GridDensity& dist,
                                           const std::vector<double>& positions,
                                           double half_width, double threshold) {
    check_windows(dist, positions, half_width, "detect_coherence_signature");
    const double dw = dist.spacing();
    const int nn = static_cast<int>(std::floor(half_width / dw));

    // Odd/even split of the density around each window center.
    std::vector<double> odd_energy(positions.size(), 0.0);
    std::vector<double> total_energy(positions.size(), 0.0);
    for (std::size_t k = 0; k < positions.size(); ++k) {
        const int c = nearest_index(dist.w, positions[k]);
        double e_odd = 0.0, e_even = 0.0;
        for (int j = 1; j <= nn; ++j) {
            if (c + j >= static_cast<int>(dist.w.size()) || c - j < 0)
                break;
            const double fp = dist.density[c + j];
            const double fm = dist.density[c - j];
            const double fo = 0.5 * (fp - fm);
            const double fe = 0.5 * (fp + fm);
            e_odd += fo * fo;
            e_even += fe * fe;
        }
        odd_energy[k] = e_odd;
        total_energy[k] = e_odd + e_even + 0.5 * dist.density[c] * dist.density[c];
    }

    const double e_max = *std::max_element(total_energy.begin(), total_energy.end());
    CoherenceReport report;
    report.threshold = threshold;
    report.window_scores.resize(positions.size());
    for (std::size_t k = 0; k < positions.size(); ++k) {
        report.window_scores[k] = e_max > 0.0 ? odd_energy[k] / e_max : 0.0;
        report.asymmetry_score = std::max(report.asymmetry_score, report.window_scores[k]);
    }
    report.symmetric = report.asymmetry_score < threshold;
    return report;
}

} // namespace qwork
