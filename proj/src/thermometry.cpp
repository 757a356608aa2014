// thermometry.cpp — thermal preparation, PDF mixing, Jarzynski integral, and
// the J(T) = 1 bath-temperature solve.

#include "qwork/thermometry.hpp"
#include "qwork/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qwork {

// --------------------------- temperature --------------------------------------

Temperature::Temperature(double milli_kelvin) : mK(milli_kelvin) {
    if (std::isnan(mK) || mK == 0.0)
        throw std::invalid_argument("Temperature: value must be nonzero (signed; infinite allowed)");
}

double Temperature::beta_per_ueV() const {
    return 1.0 / (k_boltzmann_ueV_per_mK * mK);
}

// --------------------------- thermal preparation ------------------------------

QuantumState thermal_state(const HermitianOperator& h, Temperature temp,
                           std::vector<QubitRole> roles) {
    const EighResult ed = eigh(h);
    const double beta = temp.beta_per_ueV();
    // Shift by the dominant eigenvalue so every exponent is <= 0.
    const double e_ref = beta >= 0.0 ? ed.eigenvalues.minCoeff() : ed.eigenvalues.maxCoeff();
    Eigen::VectorXd weights(ed.eigenvalues.size());
    for (Eigen::Index k = 0; k < weights.size(); ++k)
        weights[k] = std::exp(-beta * (ed.eigenvalues[k] - e_ref));
    weights /= weights.sum();

    Matrix rho = ed.eigenvectors * weights.cast<Complex>().asDiagonal() *
                 ed.eigenvectors.adjoint();
    if (roles.empty()) {
        int n = 0;
        for (Eigen::Index d = h.dim(); d > 1; d >>= 1)
            ++n;
        roles.assign(n, QubitRole::Bath);
        roles[0] = QubitRole::System;
    }
    return QuantumState(std::move(rho), std::move(roles));
}

double population_ratio(double omega_ueV, Temperature temp) {
    return std::exp(-omega_ueV * temp.beta_per_ueV());
}

// --------------------------- PDF mixing ---------------------------------------

namespace {

// Excited-level population of a two-level system at temperature T.
double excited_population(double omega_ueV, Temperature temp) {
    // 1 / (1 + e^{omega beta}); stable for both signs of beta.
    const double x = omega_ueV * temp.beta_per_ueV();
    return 1.0 / (1.0 + std::exp(x));
}

WorkDistribution mix_distributions(const WorkDistribution& cold, const WorkDistribution& hot,
                                   double r) {
    if (std::holds_alternative<DeltaComb>(cold) && std::holds_alternative<DeltaComb>(hot)) {
        const DeltaComb& a = std::get<DeltaComb>(cold);
        const DeltaComb& b = std::get<DeltaComb>(hot);
        if (a.points.size() != b.points.size())
            throw std::invalid_argument("mix_pdfs: delta combs must share their support");
        DeltaComb out;
        out.points.reserve(a.points.size());
        for (std::size_t i = 0; i < a.points.size(); ++i) {
            if (std::abs(a.points[i].first - b.points[i].first) > 1e-9)
                throw std::invalid_argument("mix_pdfs: delta combs must share their support");
            out.points.emplace_back(a.points[i].first,
                                    r * a.points[i].second + (1.0 - r) * b.points[i].second);
        }
        return out;
    }
    if (std::holds_alternative<GridDensity>(cold) && std::holds_alternative<GridDensity>(hot)) {
        const GridDensity& a = std::get<GridDensity>(cold);
        const GridDensity& b = std::get<GridDensity>(hot);
        a.validate();
        b.validate();
        if (a.w.size() != b.w.size())
            throw std::invalid_argument("mix_pdfs: grids must be identical");
        for (std::size_t i = 0; i < a.w.size(); ++i)
            if (std::abs(a.w[i] - b.w[i]) > 1e-12)
                throw std::invalid_argument("mix_pdfs: grids must be identical");
        GridDensity out;
        out.w = a.w;
        out.density.resize(a.density.size());
        for (std::size_t i = 0; i < a.density.size(); ++i)
            out.density[i] = r * a.density[i] + (1.0 - r) * b.density[i];
        return out;
    }
    throw std::invalid_argument("mix_pdfs: both PDFs must use the same representation");
}

} // namespace

MixResult mix_pdfs(const MixedPdfSpec& spec) {
    if (spec.r < 0.0 || spec.r > 1.0)
        throw std::invalid_argument("mix_pdfs: weight r must lie in [0, 1]");
    if (spec.omega_ueV <= 0.0)
        throw std::invalid_argument("mix_pdfs: omega must be positive");

    // The pure endpoints return their own preparation exactly.
    if (spec.r == 1.0)
        return {spec.pdf_cold, spec.t0};
    if (spec.r == 0.0)
        return {spec.pdf_hot, spec.t1};

    WorkDistribution mixed = mix_distributions(spec.pdf_cold, spec.pdf_hot, spec.r);

    const double r1 = spec.r * excited_population(spec.omega_ueV, spec.t0) +
                      (1.0 - spec.r) * excited_population(spec.omega_ueV, spec.t1);
    const double r0 = 1.0 - r1;
    // Invert the Boltzmann ratio R1/R0 = e^{-omega/(k_B T)} for T.
    const double log_ratio = std::log(r0 / r1);
    const double t_mix =
        log_ratio == 0.0 ? std::numeric_limits<double>::infinity()
                         : spec.omega_ueV / (k_boltzmann_ueV_per_mK * log_ratio);
    return {std::move(mixed), Temperature(t_mix)};
}

// --------------------------- Jarzynski integral -------------------------------

JarzynskiResult jarzynski_report(const WorkDistribution& pdf, Temperature temp) {
    const double beta = temp.beta_per_ueV();
    JarzynskiResult res;

    if (std::holds_alternative<DeltaComb>(pdf)) {
        const DeltaComb& comb = std::get<DeltaComb>(pdf);
        if (comb.points.empty())
            throw std::invalid_argument("jarzynski_report: empty delta comb");
        for (const auto& [w, p] : comb.points) {
            res.value += p * std::exp(-w * beta);
            res.pdf_mass += p;
        }
    } else {
        const GridDensity& grid = std::get<GridDensity>(pdf);
        grid.validate();
        const double dw = grid.spacing();
        const std::size_t n = grid.w.size();
        // Overflow guard: far from the peaks the density is pure truncation
        // ringing, but e^{-beta w} can be astronomically large there.
        std::vector<double> integrand(n), clipped(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(grid.w[i] * beta) > 50.0) {
                integrand[i] = 0.0;
                clipped[i] = grid.density[i];
            } else {
                integrand[i] = grid.density[i] * std::exp(-grid.w[i] * beta);
            }
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            res.value += 0.5 * (integrand[i] + integrand[i + 1]) * dw;
            res.clipped_mass += 0.5 * (clipped[i] + clipped[i + 1]) * dw;
        }
        res.pdf_mass = grid.total_mass();
    }
    res.normalized = std::abs(res.pdf_mass - 1.0) <= 1e-6;
    return res;
}

double jarzynski_integral(const WorkDistribution& pdf, Temperature temp) {
    return jarzynski_report(pdf, temp).value;
}

// --------------------------- bath-temperature solve ---------------------------

BathTemperatureResult solve_bath_temperature(const CurveBuilder& builder,
                                             Temperature range_low, Temperature range_high,
                                             int curve_samples) {
    if (!(range_low.mK < range_high.mK))
        throw std::invalid_argument("solve_bath_temperature: range must have low < high");
    if (curve_samples < 3)
        throw std::invalid_argument("solve_bath_temperature: need at least 3 curve samples");

    // Sample the builder's curve and keep points inside the search range.
    std::vector<JCurvePoint> curve;
    for (int i = 0; i < curve_samples; ++i) {
        const double r = static_cast<double>(i) / (curve_samples - 1);
        const MixResult mixed = builder(r);
        const double t = mixed.temperature.mK;
        if (!std::isfinite(t) || t < range_low.mK || t > range_high.mK)
            continue;
        curve.push_back({r, t, jarzynski_integral(mixed.pdf, mixed.temperature)});
    }
    std::sort(curve.begin(), curve.end(),
              [](const JCurvePoint& a, const JCurvePoint& b) {
                  return a.temperature_mK < b.temperature_mK;
              });

    BathTemperatureResult result{Temperature(1.0), std::move(curve), 0, {0.0, 0.0}, true, {}};
    if (result.curve.size() < 2) {
        throw std::runtime_error(
            "solve_bath_temperature: fewer than two curve samples fall inside the search range");
    }

    for (std::size_t i = 1; i < result.curve.size(); ++i) {
        if (result.curve[i].j_value > result.curve[i - 1].j_value + 1e-9) {
            result.monotone = false;
            std::ostringstream msg;
            msg << "J(T) is not monotone decreasing near T = "
                << result.curve[i].temperature_mK << " mK";
            result.diagnostics.push_back(msg.str());
            break;
        }
    }

    // Exactly one sign change of J - 1 is required for an unambiguous root.
    auto sgn = [](double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); };
    int bracket = -1;
    int bracket_count = 0;
    for (std::size_t i = 1; i < result.curve.size(); ++i) {
        const int s0 = sgn(result.curve[i - 1].j_value - 1.0);
        const int s1 = sgn(result.curve[i].j_value - 1.0);
        if (s0 == 0) { // sampled the root exactly
            result.root = Temperature(result.curve[i - 1].temperature_mK);
            result.bracket_mK = {result.curve[i - 1].temperature_mK,
                                 result.curve[i - 1].temperature_mK};
            return result;
        }
        if (s0 != s1) {
            bracket = static_cast<int>(i) - 1;
            ++bracket_count;
        }
    }
    if (bracket_count == 0) {
        std::ostringstream msg;
        msg << "solve_bath_temperature: J(T) - 1 has no sign change on ["
            << range_low.mK << ", " << range_high.mK << "] mK; endpoints J("
            << result.curve.front().temperature_mK << ") = " << result.curve.front().j_value
            << ", J(" << result.curve.back().temperature_mK << ") = "
            << result.curve.back().j_value;
        throw std::runtime_error(msg.str());
    }
    if (bracket_count > 1) {
        std::ostringstream msg;
        msg << "solve_bath_temperature: J(T) - 1 changes sign " << bracket_count
            << " times on the sampled curve; root is ambiguous";
        throw std::runtime_error(msg.str());
    }

    // Bisect in the builder parameter while tracking the temperature spread.
    double r_lo = result.curve[bracket].r;
    double r_hi = result.curve[bracket + 1].r;
    double t_lo = result.curve[bracket].temperature_mK;
    double t_hi = result.curve[bracket + 1].temperature_mK;
    int s_lo = sgn(result.curve[bracket].j_value - 1.0);
    result.bracket_mK = {t_lo, t_hi};

    double t_root = 0.5 * (t_lo + t_hi);
    for (int iter = 0; iter < 200 && std::abs(t_hi - t_lo) > 0.1; ++iter) {
        const double r_mid = 0.5 * (r_lo + r_hi);
        const MixResult mixed = builder(r_mid);
        const double j_mid = jarzynski_integral(mixed.pdf, mixed.temperature);
        const int s_mid = sgn(j_mid - 1.0);
        ++result.bisection_iterations;
        t_root = mixed.temperature.mK;
        if (s_mid == 0)
            break;
        if (s_mid == s_lo) {
            r_lo = r_mid;
            t_lo = mixed.temperature.mK;
        } else {
            r_hi = r_mid;
            t_hi = mixed.temperature.mK;
        }
    }
    result.root = Temperature(t_root);
    return result;
}

} // namespace qwork
