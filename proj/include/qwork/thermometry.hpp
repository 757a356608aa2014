// thermometry.hpp — Thermal state preparation, work-PDF mixing with its
// effective temperature, the Jarzynski integral, and bath-temperature
// estimation by locating the root of J(T) = 1.

#pragma once

#include "qwork/linalg.hpp"
#include "qwork/work.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qwork {

// --------------------------- temperature --------------------------------------

// Signed temperature in mK. Negative values describe population inversion;
// T = 0 (infinite beta) is excluded. beta carries units 1/ueV.
struct Temperature {
    double mK = 0.0;

    explicit Temperature(double milli_kelvin);
    double beta_per_ueV() const; // 1 / (k_B T)
};

// --------------------------- thermal preparation ------------------------------

// Gibbs state e^{-beta h} / Z. The optional role list labels the register for
// downstream circuit use; when empty, qubit 0 is System and the rest Bath.
QuantumState thermal_state(const HermitianOperator& h, Temperature temp,
                           std::vector<QubitRole> roles = {});

// Boltzmann population ratio P1/P0 = e^{-omega / (k_B T)} of a two-level
// system with splitting omega (ueV).
double population_ratio(double omega_ueV, Temperature temp);

// --------------------------- PDF mixing ---------------------------------------

struct MixedPdfSpec {
    WorkDistribution pdf_cold; // preparation at T0
    WorkDistribution pdf_hot;  // preparation at T1
    double r = 1.0;            // convex weight of the cold PDF
    Temperature t0;
    Temperature t1;
    double omega_ueV = 0.0;    // two-level splitting entering the temperature map
};

struct MixResult {
    WorkDistribution pdf;
    Temperature temperature;
};

// Convex combination r * cold + (1 - r) * hot (both PDFs must share support or
// grid). The returned temperature is the one whose Boltzmann ratio matches the
// mixed two-level populations:
//   T = omega / (k_B ln(R0 / R1)),  R_n = r P_n(T0) + (1 - r) P_n(T1),
// with P1(T) = 1 / (1 + e^{omega beta}) and P0 = 1 - P1. The weights r = 0 and
// r = 1 return T1 / T0 exactly. A mixture whose populations balance exactly
// maps to an infinite temperature (beta = 0), which is representable.
MixResult mix_pdfs(const MixedPdfSpec& spec);

// --------------------------- Jarzynski integral -------------------------------

struct JarzynskiResult {
    double value = 0.0;        // J(T) = integral of p(w) e^{-w/(k_B T)}
    double pdf_mass = 0.0;     // total weight/mass of the input PDF
    double clipped_mass = 0.0; // grid mass skipped by the overflow guard
    bool normalized = true;    // |pdf_mass - 1| <= 1e-6
};

// Exact weighted sum for a DeltaComb; trapezoidal integral for a GridDensity.
// Grid integration skips points where |w| beta > 50 (the exponential would
// swamp double precision on reconstruction ringing far from the peaks) and
// reports the skipped mass.
JarzynskiResult jarzynski_report(const WorkDistribution& pdf, Temperature temp);

// Convenience projection of jarzynski_report.
double jarzynski_integral(const WorkDistribution& pdf, Temperature temp);

// --------------------------- bath-temperature solve ---------------------------

// One sampled point of the J(T) curve.
struct JCurvePoint {
    double r = 0.0;
    double temperature_mK = 0.0;
    double j_value = 0.0;
};

struct BathTemperatureResult {
    Temperature root;
    std::vector<JCurvePoint> curve; // sorted by temperature
    int bisection_iterations = 0;
    std::pair<double, double> bracket_mK{0.0, 0.0};
    bool monotone = true;           // J non-increasing in T along the curve
    std::vector<std::string> diagnostics;
};

// Curve builder: maps a mixing weight r in [0, 1] to a (pdf, T) pair, e.g. by
// mix_pdfs over two measured PDFs, or by pairing one fixed PDF with a scanned
// temperature for validation runs.
using CurveBuilder = std::function<MixResult(double r)>;

// Samples J along the builder's curve, keeps points with T inside the search
// range, requires exactly one sign change of J - 1, and bisects (in r, tracking
// T) to 0.1 mK. A non-monotone sampled curve is reported as a diagnostic; no
// sign change or an ambiguous bracket raises a numerical error carrying the
// curve endpoints.
BathTemperatureResult solve_bath_temperature(const CurveBuilder& builder,
                                             Temperature range_low, Temperature range_high,
                                             int curve_samples = 129);

} // namespace qwork
