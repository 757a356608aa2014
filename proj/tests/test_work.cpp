// test_work.cpp — exact work distributions, quasi-probabilities, sampled
// characteristic-function sweeps, and the half-inverse-Fourier reconstruction,
// each checked against hand formulas or independently coded oracles.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"
#include "qwork/constants.hpp"
#include "qwork/work.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

using namespace qwork;
using testutil::random_commuting_density;
using testutil::random_density;
using testutil::random_hermitian;
using testutil::random_unitary;

namespace {

const double omega = default_hbar_omega_ueV;

QuantumState one_qubit(const Matrix& rho) {
    return QuantumState(rho, {QubitRole::System});
}

double comb_weight_at(const DeltaComb& comb, double w, double tol = 1e-6) {
    double total = 0.0;
    for (const auto& [pos, weight] : comb.points)
        if (std::abs(pos - w) < tol)
            total += weight;
    return total;
}

// Independent rectangle-rule transform used as the reconstruction oracle.
double naive_half_transform(const CharFnSamples& s, double w) {
    const double du = s.u[1] - s.u[0];
    Complex acc = 0.5 * s.values[0];
    for (std::size_t j = 1; j < s.u.size(); ++j)
        acc += std::exp(Complex(0.0, -s.u[j] * w)) * s.values[j];
    return 2.0 * (du / (2.0 * std::numbers::pi)) * acc.real();
}

CharFnSamples synthesize_from_comb(const DeltaComb& comb, int num_points, double du) {
    CharFnSamples s;
    for (int j = 0; j < num_points; ++j) {
        const double u = j * du;
        Complex g = 0.0;
        for (const auto& [w, weight] : comb.points)
            g += weight * std::exp(Complex(0.0, u * w));
        s.u.push_back(u);
        s.values.push_back(g);
    }
    return s;
}

double gaussian(double w, double center, double sigma) {
    const double d = (w - center) / sigma;
    return std::exp(-0.5 * d * d) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

} // namespace

TEST_CASE("delta combs sort, merge, and total correctly") {
    const DeltaComb comb =
        make_delta_comb({{omega, 0.2}, {0.0, 0.3}, {omega + 1e-12, 0.3}, {-omega, 0.2}});
    REQUIRE(comb.points.size() == 3); // the two nearby peaks merged
    CHECK(comb.points[0].first == doctest::Approx(-omega));
    CHECK(comb.points[1].first == doctest::Approx(0.0));
    CHECK(comb.points[2].first == doctest::Approx(omega));
    CHECK(comb.points[2].second == doctest::Approx(0.5));
    CHECK(comb.total_weight() == doctest::Approx(1.0));
    CHECK(comb.is_normalized());
    CHECK_FALSE(make_delta_comb({{0.0, 0.7}}).is_normalized());
}

TEST_CASE("two-point-measurement work PDF matches hand results") {
    const HermitianOperator h0(-0.5 * omega * sigma_z());

    // ground state driven by sqrt(X): half stays, half absorbs one quantum
    const DeltaComb ground = tpm_work_pdf(one_qubit(ket_bra(0)), h0, sqrt_x());
    REQUIRE(ground.points.size() == 2);
    CHECK(comb_weight_at(ground, 0.0) == doctest::Approx(0.5));
    CHECK(comb_weight_at(ground, omega) == doctest::Approx(0.5));

    // identity drive does no work on anything
    std::mt19937_64 rng(41);
    const DeltaComb none = tpm_work_pdf(one_qubit(random_density(rng, 2)), h0, identity(2));
    REQUIRE(none.points.size() == 1);
    CHECK(none.points[0].first == doctest::Approx(0.0));
    CHECK(none.points[0].second == doctest::Approx(1.0));

    // thermal preparation adds the emission peak with weight p1/2
    Matrix thermal = Matrix::Zero(2, 2);
    thermal(0, 0) = 0.97;
    thermal(1, 1) = 0.03;
    const DeltaComb mixed = tpm_work_pdf(one_qubit(thermal), h0, sqrt_x());
    REQUIRE(mixed.points.size() == 3);
    CHECK(comb_weight_at(mixed, -omega) == doctest::Approx(0.015));
    CHECK(comb_weight_at(mixed, 0.0) == doctest::Approx(0.5));
    CHECK(comb_weight_at(mixed, omega) == doctest::Approx(0.485));
    CHECK(mixed.is_normalized());

    // weights are a doubly stochastic mix of populations: always normalized
    for (int trial = 0; trial < 10; ++trial) {
        const int dim = 1 << (1 + trial % 2);
        const DeltaComb comb = tpm_work_pdf(
            QuantumState(random_density(rng, dim),
                         std::vector<QubitRole>(trial % 2 ? 2 : 1, QubitRole::System)),
            HermitianOperator(random_hermitian(rng, dim)), random_unitary(rng, dim));
        CHECK(comb.is_normalized(1e-9));
        for (const auto& [w, weight] : comb.points)
            CHECK(weight >= -1e-12);
    }
}

TEST_CASE("quasi-probabilities sum to one with proper marginals") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        const int dim = 4;
        const HermitianOperator h0(random_hermitian(rng, dim));
        const Matrix rho = random_density(rng, dim);
        const Matrix drive = random_unitary(rng, dim);
        const QuantumState state(rho, {QubitRole::System, QubitRole::Bath});

        const QuasiProbMatrix q = quasiprob(state, h0, drive);
        CHECK_NOTHROW(q.validate());
        CHECK(std::abs(q.entries.sum() - Complex(1.0)) < 1e-10);

        // energies ascend
        for (Eigen::Index i = 1; i < q.energies.size(); ++i)
            CHECK(q.energies(i) >= q.energies(i - 1));

        // initial marginal (column sums) = populations of rho in the H0 basis;
        // final marginal (row sums) = populations of U rho U^dag
        const EighResult es = eigh(h0);
        const Matrix rho_e = es.eigenvectors.adjoint() * rho * es.eigenvectors;
        const Matrix evolved = drive * rho * drive.adjoint();
        const Matrix evolved_e = es.eigenvectors.adjoint() * evolved * es.eigenvectors;
        for (Eigen::Index n = 0; n < dim; ++n) {
            const Complex col = q.entries.col(n).sum();
            const Complex row = q.entries.row(n).sum();
            CHECK(std::abs(col - rho_e(n, n)) < 1e-10);
            CHECK(std::abs(row - evolved_e(n, n)) < 1e-10);
            CHECK(col.real() >= -1e-12);
            CHECK(std::abs(col.imag()) < 1e-12);
        }
    }
}

TEST_CASE("diagonal preparations collapse quasi-probabilities to the TPM joint") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 1 << (1 + trial % 2);
        const HermitianOperator h0(random_hermitian(rng, dim));
        const EighResult es = eigh(h0);
        const Matrix rho = random_commuting_density(rng, es.eigenvectors);
        const Matrix drive = random_unitary(rng, dim);
        const std::vector<QubitRole> roles(dim == 2 ? 1 : 2, QubitRole::System);
        const QuantumState state(rho, roles);

        const QuasiProbMatrix q = quasiprob(state, h0, drive);
        CHECK(q.entries.imag().cwiseAbs().maxCoeff() < 1e-10);

        // TPM joint oracle p_mn = <n|rho|n> |<m|U|n>|^2 in the energy basis
        const Matrix rho_e = es.eigenvectors.adjoint() * rho * es.eigenvectors;
        const Matrix u_e = es.eigenvectors.adjoint() * drive * es.eigenvectors;
        double max_diff = 0.0;
        for (Eigen::Index m = 0; m < dim; ++m)
            for (Eigen::Index n = 0; n < dim; ++n) {
                const double p = rho_e(n, n).real() * std::norm(u_e(m, n));
                max_diff = std::max(max_diff, std::abs(q.entries(m, n) - Complex(p)));
            }
        CHECK(max_diff < 1e-10);
    }

    // a coherent preparation produces genuinely complex entries
    const HermitianOperator h0(-0.5 * omega * sigma_z());
    Matrix plus = Matrix::Constant(2, 2, 0.5);
    const QuasiProbMatrix q = quasiprob(one_qubit(plus), h0, sqrt_x());
    CHECK(q.entries.imag().cwiseAbs().maxCoeff() > 0.01);
}

TEST_CASE("analytic characteristic function matches hand formulas") {
    const HermitianOperator h0(-0.5 * omega * sigma_z());

    CHECK(std::abs(char_fn_direct(one_qubit(ket_bra(0)), h0, sqrt_x(), 0.0) -
                   Complex(1.0)) < 1e-14);

    for (double u : {-1.3, 0.02, 0.7, 2.9}) {
        const Complex expected = 0.5 + 0.5 * std::exp(Complex(0.0, u * omega));
        CHECK(std::abs(char_fn_direct(one_qubit(ket_bra(0)), h0, sqrt_x(), u) -
                       expected) < 1e-12);
        CHECK(std::abs(char_fn_direct(one_qubit(ket_bra(0)), h0, identity(2), u) -
                       Complex(1.0)) < 1e-12);
    }

    // g(u) equals the phase-weighted sum over the quasi-probability matrix
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 10; ++trial) {
        const HermitianOperator h(random_hermitian(rng, 4));
        const Matrix rho = random_density(rng, 4);
        const Matrix drive = random_unitary(rng, 4);
        const QuantumState state(rho, {QubitRole::System, QubitRole::Bath});
        const QuasiProbMatrix q = quasiprob(state, h, drive);

        for (double u : {-0.9, 0.37, 1.8}) {
            Complex from_q = 0.0;
            for (Eigen::Index m = 0; m < 4; ++m)
                for (Eigen::Index n = 0; n < 4; ++n)
                    from_q += q.entries(m, n) *
                              std::exp(Complex(0.0, u * (q.energies(m) - q.energies(n))));
            CHECK(std::abs(char_fn_direct(state, h, drive, u) - from_q) < 1e-10);
        }
    }

    // commuting preparations give a Hermitian characteristic function
    const HermitianOperator h_c(random_hermitian(rng, 2));
    const Matrix rho_c = random_commuting_density(rng, eigh(h_c).eigenvectors);
    const Matrix drive_c = random_unitary(rng, 2);
    for (double u : {0.2, 1.1}) {
        const Complex plus = char_fn_direct(one_qubit(rho_c), h_c, drive_c, u);
        const Complex minus = char_fn_direct(one_qubit(rho_c), h_c, drive_c, -u);
        CHECK(std::abs(plus - std::conj(minus)) < 1e-12);
    }
}

TEST_CASE("exact sweeps reproduce the analytic characteristic function") {
    std::mt19937_64 rng(45);
    for (int n : {1, 2, 3}) {
        const int dim = 1 << n;
        const SweepSystem sys{HermitianOperator(random_hermitian(rng, dim)),
                              random_unitary(rng, 2), random_density(rng, dim)};

        const CharFnSamples s = sweep_char_fn_points(sys, 40, 0.05, SweepMode{});
        REQUIRE(s.u.size() == 40);
        CHECK(s.spacing() == doctest::Approx(0.05));
        CHECK(s.shots == 0);

        std::vector<QubitRole> roles(n, QubitRole::System);
        if (n > 1)
            std::fill(roles.begin() + 1, roles.end(), QubitRole::Bath);
        const QuantumState state(sys.rho_sb, roles);
        const Matrix padded =
            n == 1 ? sys.drive : tensor_product(sys.drive, identity(dim / 2));
        for (std::size_t j = 0; j < s.u.size(); ++j) {
            CHECK(std::abs(s.values[j] -
                           char_fn_direct(state, sys.h0, padded, s.u[j])) < 1e-10);
            CHECK(std::abs(s.values[j]) <= 1.0 + 1e-9);
        }
    }

    // the range-based wrapper includes the endpoint rule floor(u_max/du) + 1
    const SweepSystem sys{HermitianOperator(-0.5 * omega * sigma_z()), sqrt_x(),
                          ket_bra(0)};
    const CharFnSamples wide = sweep_char_fn(sys, 11.5, 0.013, SweepMode{});
    CHECK(wide.u.size() == 885);
    CHECK(wide.u.front() == doctest::Approx(0.0));
}

TEST_CASE("sampled sweeps are seeded deterministically") {
    const SweepSystem sys{HermitianOperator(-0.5 * omega * sigma_z()), sqrt_x(),
                          ket_bra(0)};

    const SweepMode mode{256, 909};
    const CharFnSamples a = sweep_char_fn_points(sys, 12, 0.1, mode);
    const CharFnSamples b = sweep_char_fn_points(sys, 12, 0.1, mode);
    REQUIRE(a.values.size() == b.values.size());
    CHECK(a.shots == 256);
    for (std::size_t j = 0; j < a.values.size(); ++j)
        CHECK(a.values[j] == b.values[j]);

    // the real part at u = 0 is a certain outcome even with finite shots
    CHECK(a.values[0].real() == doctest::Approx(1.0));
    CHECK(std::abs(a.values[0].imag()) < 4.0 / std::sqrt(256.0));

    const CharFnSamples c = sweep_char_fn_points(sys, 12, 0.1, SweepMode{256, 910});
    bool any_different = false;
    for (std::size_t j = 0; j < a.values.size(); ++j)
        any_different = any_different || a.values[j] != c.values[j];
    CHECK(any_different);
}

TEST_CASE("ancilla thermal population rescales the sweep uniformly") {
    std::mt19937_64 rng(46);
    const SweepSystem sys{HermitianOperator(random_hermitian(rng, 2)),
                          random_unitary(rng, 2), random_density(rng, 2)};

    SweepSystem damped = sys;
    damped.ancilla_excited_population = 0.01;

    const CharFnSamples ideal = sweep_char_fn_points(sys, 25, 0.07, SweepMode{});
    const CharFnSamples scaled = sweep_char_fn_points(damped, 25, 0.07, SweepMode{});
    for (std::size_t j = 0; j < ideal.values.size(); ++j)
        CHECK(std::abs(scaled.values[j] - 0.98 * ideal.values[j]) < 1e-10);
}

TEST_CASE("a trivial noise model leaves the exact sweep untouched") {
    const SweepSystem sys{HermitianOperator(-0.5 * omega * sigma_z()), sqrt_x(),
                          ket_bra(0)};

    NoiseModel trivial;
    trivial.qubits.resize(2);
    const CharFnSamples clean = sweep_char_fn_points(sys, 15, 0.09, SweepMode{});
    const CharFnSamples with_trivial =
        sweep_char_fn_points(sys, 15, 0.09, SweepMode{}, &trivial);
    for (std::size_t j = 0; j < clean.values.size(); ++j)
        CHECK(std::abs(clean.values[j] - with_trivial.values[j]) < 1e-12);
}

TEST_CASE("reconstruction recovers known combs and matches the naive transform") {
    const DeltaComb comb =
        make_delta_comb({{-omega, 0.015}, {0.0, 0.5}, {omega, 0.485}});
    const CharFnSamples samples = synthesize_from_comb(comb, 900, 0.013);
    const std::vector<double> grid = make_w_grid(-2.5 * omega, 2.5 * omega, 1001);
    const GridDensity density = half_inverse_fourier(samples, grid);
    density.validate();

    const auto peaks = extract_peaks(density, {-omega, 0.0, omega}, 5.0);
    REQUIRE(peaks.size() == 3);
    CHECK(std::abs(peaks[0].second - 0.015) < 0.02);
    CHECK(std::abs(peaks[1].second - 0.5) < 0.02);
    CHECK(std::abs(peaks[2].second - 0.485) < 0.02);
    CHECK(std::abs(density.total_mass() - 1.0) < 0.05);

    // pointwise agreement with an independently coded rectangle rule
    for (double w : {-30.0, -omega, -3.3, 0.0, 7.7, omega, 42.0}) {
        // evaluate on the exact grid point closest to w
        std::size_t idx = 0;
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (std::abs(grid[i] - w) < std::abs(grid[idx] - w))
                idx = i;
        CHECK(std::abs(density.density[idx] -
                       naive_half_transform(samples, grid[idx])) < 1e-12);
    }

    // g identically 1 is the zero-work distribution
    const CharFnSamples flat = synthesize_from_comb(make_delta_comb({{0.0, 1.0}}), 900, 0.013);
    const GridDensity zero_work = half_inverse_fourier(flat, grid);
    const auto zw = extract_peaks(zero_work, {0.0}, 5.0);
    CHECK(std::abs(zw[0].second - 1.0) < 0.02);

    // random combs on the resolvable lattice are recovered within tolerance
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 5; ++trial) {
        double w1 = 0.0, w2 = 0.0, w3 = 0.0;
        w1 = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
        w2 = std::uniform_real_distribution<double>(0.0, 1.0 - w1)(rng);
        w3 = 1.0 - w1 - w2;
        const DeltaComb random_comb =
            make_delta_comb({{-omega, w3}, {0.0, w1}, {omega, w2}});
        const GridDensity d =
            half_inverse_fourier(synthesize_from_comb(random_comb, 900, 0.013), grid);
        const auto p = extract_peaks(d, {-omega, 0.0, omega}, 5.0);
        CHECK(std::abs(p[0].second - w3) < 0.02);
        CHECK(std::abs(p[1].second - w1) < 0.02);
        CHECK(std::abs(p[2].second - w2) < 0.02);
    }
}

TEST_CASE("the reconstruction is linear in the samples") {
    const CharFnSamples g1 =
        synthesize_from_comb(make_delta_comb({{0.0, 0.6}, {omega, 0.4}}), 300, 0.02);
    const CharFnSamples g2 =
        synthesize_from_comb(make_delta_comb({{-omega, 0.5}, {0.0, 0.5}}), 300, 0.02);
    CharFnSamples mix = g1;
    for (std::size_t j = 0; j < mix.values.size(); ++j)
        mix.values[j] = 0.3 * g1.values[j] + 0.7 * g2.values[j];

    const std::vector<double> grid = make_w_grid(-40.0, 40.0, 401);
    const GridDensity d1 = half_inverse_fourier(g1, grid);
    const GridDensity d2 = half_inverse_fourier(g2, grid);
    const GridDensity dm = half_inverse_fourier(mix, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(dm.density[i] - (0.3 * d1.density[i] + 0.7 * d2.density[i])) <
              1e-12);
}

TEST_CASE("the optional taper suppresses truncation ringing") {
    const CharFnSamples samples =
        synthesize_from_comb(make_delta_comb({{0.0, 1.0}}), 900, 0.013);
    const std::vector<double> grid = make_w_grid(-2.5 * omega, 2.5 * omega, 1001);
    const GridDensity raw = half_inverse_fourier(samples, grid);
    const GridDensity tapered = half_inverse_fourier(samples, grid, true);

    auto wing_energy = [&](const GridDensity& d) {
        double e = 0.0;
        for (std::size_t i = 0; i < d.w.size(); ++i)
            if (std::abs(d.w[i]) > 5.0)
                e += d.density[i] * d.density[i];
        return e;
    };
    CHECK(wing_energy(tapered) < 0.5 * wing_energy(raw));
    // the peak itself survives the taper
    const auto p = extract_peaks(tapered, {0.0}, 5.0);
    CHECK(std::abs(p[0].second - 1.0) < 0.02);
}

TEST_CASE("reconstruction inputs are validated") {
    CharFnSamples empty;
    CHECK_THROWS_AS((void)half_inverse_fourier(empty, make_w_grid(-1.0, 1.0, 11)),
                    std::invalid_argument);

    CharFnSamples crooked;
    crooked.u = {0.0, 0.1, 0.3}; // non-uniform
    crooked.values = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS((void)half_inverse_fourier(crooked, make_w_grid(-1.0, 1.0, 11)),
                    std::invalid_argument);

    CHECK_THROWS_AS((void)make_w_grid(1.0, -1.0, 11), std::invalid_argument);
    CHECK_THROWS_AS((void)make_w_grid(-1.0, 1.0, 1), std::invalid_argument);

    const std::vector<double> grid = make_w_grid(-2.0, 2.0, 5);
    CHECK(grid.front() == doctest::Approx(-2.0));
    CHECK(grid.back() == doctest::Approx(2.0));
    CHECK(grid[1] - grid[0] == doctest::Approx(1.0));
}

TEST_CASE("peak extraction integrates synthetic lineshapes") {
    const std::vector<double> w = make_w_grid(-30.0, 30.0, 2401);
    GridDensity d;
    d.w = w;
    d.density.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        d.density[i] = 0.3 * gaussian(w[i], -10.0, 0.5) + 0.7 * gaussian(w[i], 12.0, 0.5);

    const auto peaks = extract_peaks(d, {-10.0, 12.0}, 4.0);
    CHECK(peaks[0].first == doctest::Approx(-10.0));
    CHECK(std::abs(peaks[0].second - 0.3) < 1e-4);
    CHECK(std::abs(peaks[1].second - 0.7) < 1e-4);

    GridDensity flat = d;
    std::fill(flat.density.begin(), flat.density.end(), 0.0);
    const auto nothing = extract_peaks(flat, {-10.0, 12.0}, 4.0);
    CHECK(nothing[0].second == doctest::Approx(0.0));
    CHECK(nothing[1].second == doctest::Approx(0.0));

    CHECK_THROWS_AS((void)extract_peaks(d, {0.0, 4.0}, 2.5), std::invalid_argument);
    CHECK_THROWS_AS((void)extract_peaks(d, {29.0}, 4.0), std::invalid_argument);
}

TEST_CASE("coherence detection keys on odd components around real peaks") {
    const std::vector<double> w = make_w_grid(-2.5 * omega, 2.5 * omega, 2001);
    GridDensity d;
    d.w = w;
    d.density.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        d.density[i] = 0.5 * gaussian(w[i], 0.0, 1.0) + 0.5 * gaussian(w[i], omega, 1.0);

    const std::vector<double> positions{-omega, 0.0, omega};
    const CoherenceReport clean = detect_coherence_signature(d, positions, 5.0);
    CHECK(clean.symmetric);
    CHECK(clean.asymmetry_score < 1e-10);
    REQUIRE(clean.window_scores.size() == 3);

    // an empty window containing only a tiny odd ripple must not trip the
    // verdict: scores are normalized by the largest window energy, not its own
    GridDensity rippled = d;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (std::abs(w[i] + omega) < 5.0)
            rippled.density[i] += 1e-4 * (w[i] + omega);
    const CoherenceReport still_ok = detect_coherence_signature(rippled, positions, 5.0);
    CHECK(still_ok.symmetric);
    CHECK(still_ok.window_scores[0] < still_ok.threshold);

    // a genuine antisymmetric wing on a real peak flips the verdict
    GridDensity skewed = d;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double x = w[i] - omega;
        if (std::abs(x) < 5.0 && std::abs(x) > 1e-9)
            skewed.density[i] += 0.25 * x * std::exp(-0.5 * x * x);
    }
    const CoherenceReport coherent = detect_coherence_signature(skewed, positions, 5.0);
    CHECK_FALSE(coherent.symmetric);
    CHECK(coherent.asymmetry_score > coherent.threshold);
}
