// noise.cpp — Kraus channels, CPTP verification, and the spectator-qubit bath.

#include "qwork/noise.hpp"
#include "qwork/constants.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace qwork {

// --------------------------- Kraus channels ----------------------------------

KrausChannel::KrausChannel(std::vector<Matrix> ops, std::string lbl)
    : operators(std::move(ops)), label(std::move(lbl)) {
    if (operators.empty())
        throw std::invalid_argument("KrausChannel: operator list must be non-empty");
    const Eigen::Index d = operators.front().rows();
    if ((d & (d - 1)) != 0 || d == 0)
        throw std::invalid_argument("KrausChannel: dimension must be a power of two");
    for (const Matrix& k : operators)
        if (k.rows() != d || k.cols() != d)
            throw std::invalid_argument("KrausChannel: operators must share one square dimension");
}

int KrausChannel::num_qubits() const {
    int n = 0;
    for (Eigen::Index d = dim(); d > 1; d >>= 1)
        ++n;
    return n;
}

KrausChannel depolarizing_channel(double p, int num_qubits) {
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("depolarizing_channel: p must lie in [0, 1]");
    if (num_qubits != 1 && num_qubits != 2)
        throw std::invalid_argument("depolarizing_channel: num_qubits must be 1 or 2");

    const std::vector<Matrix> paulis = {identity(2), sigma_x(), sigma_y(), sigma_z()};
    const double dim4 = std::pow(4.0, num_qubits);

    std::vector<Matrix> ops;
    ops.push_back(std::sqrt(1.0 - p * (dim4 - 1.0) / dim4) *
                  identity(Eigen::Index(1) << num_qubits));
    const double amp = std::sqrt(p / dim4);
    if (amp > 0.0) {
        if (num_qubits == 1) {
            for (int a = 1; a < 4; ++a)
                ops.push_back(amp * paulis[a]);
        } else {
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    if (a == 0 && b == 0)
                        continue;
                    ops.push_back(amp * tensor_product(paulis[a], paulis[b]));
                }
        }
    }
    std::ostringstream lbl;
    lbl << "depolarizing(p=" << p << ", n=" << num_qubits << ")";
    return KrausChannel(std::move(ops), lbl.str());
}

double depol_p_from_fidelity(double fidelity, int num_qubits) {
    if (fidelity < 0.0 || fidelity > 1.0)
        throw std::invalid_argument("depol_p_from_fidelity: fidelity must lie in [0, 1]");
    if (num_qubits != 1 && num_qubits != 2)
        throw std::invalid_argument("depol_p_from_fidelity: num_qubits must be 1 or 2");
    const double dim4 = std::pow(4.0, num_qubits);
    return dim4 / (dim4 - 1.0) * (1.0 - fidelity);
}

KrausChannel thermal_relaxation_channel(double t1_us, double t2_us,
                                        double duration_us, double p_exc) {
    if (t1_us <= 0.0 || t2_us <= 0.0)
        throw std::invalid_argument("thermal_relaxation_channel: T1 and T2 must be positive");
    if (t2_us > 2.0 * t1_us)
        throw std::invalid_argument("thermal_relaxation_channel: T2 > 2*T1 is unphysical");
    if (duration_us < 0.0)
        throw std::invalid_argument("thermal_relaxation_channel: duration must be non-negative");
    if (p_exc < 0.0 || p_exc > 1.0)
        throw std::invalid_argument("thermal_relaxation_channel: p_exc must lie in [0, 1]");

    // Generalized amplitude damping toward the p_exc-weighted equilibrium.
    const double gamma = 1.0 - std::exp(-duration_us / t1_us);
    // Extra pure dephasing so total off-diagonal decay is e^{-t/T2}
    // (amplitude damping alone contributes e^{-t/(2 T1)}).
    const double pz = 0.5 * (1.0 - std::exp(-duration_us / t2_us + duration_us / (2.0 * t1_us)));

    const double sg = std::sqrt(gamma);
    const double sg1 = std::sqrt(1.0 - gamma);
    std::vector<Matrix> gad;
    {
        Matrix k(2, 2);
        k << 1.0, 0.0, 0.0, sg1;
        gad.push_back(std::sqrt(1.0 - p_exc) * k);
        k << 0.0, sg, 0.0, 0.0;
        gad.push_back(std::sqrt(1.0 - p_exc) * k);
        k << sg1, 0.0, 0.0, 1.0;
        gad.push_back(std::sqrt(p_exc) * k);
        k << 0.0, 0.0, sg, 0.0;
        gad.push_back(std::sqrt(p_exc) * k);
    }

    std::vector<Matrix> ops;
    for (const Matrix& k : gad) {
        if (k.norm() == 0.0)
            continue;
        if (pz < 1.0)
            ops.push_back(std::sqrt(1.0 - pz) * k);
        if (pz > 0.0)
            ops.push_back(std::sqrt(pz) * (sigma_z() * k));
    }
    std::ostringstream lbl;
    lbl << "thermal_relaxation(T1=" << t1_us << "us, T2=" << t2_us
        << "us, t=" << duration_us << "us, p_exc=" << p_exc << ")";
    return KrausChannel(std::move(ops), lbl.str());
}

QuantumState apply_channel(const QuantumState& state, const KrausChannel& channel,
                           const std::vector<int>& targets) {
    if (channel.num_qubits() != static_cast<int>(targets.size()))
        throw std::invalid_argument("apply_channel: channel dimension does not match target count");
    Matrix out = Matrix::Zero(state.dim(), state.dim());
    for (const Matrix& k : channel.operators) {
        const Matrix ke = embed_operator(k, targets, state.num_qubits());
        out += ke * state.matrix() * ke.adjoint();
    }
    return QuantumState(std::move(out), state.roles());
}

CptpReport verify_cptp(const KrausChannel& channel) {
    const Eigen::Index d = channel.dim();
    CptpReport report;

    Matrix ksum = Matrix::Zero(d, d);
    for (const Matrix& k : channel.operators)
        ksum += k.adjoint() * k;
    const double tp_violation = max_abs_diff(ksum, identity(d));
    report.trace_preserving = tp_violation < 1e-10;

    // Choi matrix as the sum of vectorized-operator outer products
    // (column-stacking convention); complete positivity <=> Choi PSD.
    Matrix choi = Matrix::Zero(d * d, d * d);
    for (const Matrix& k : channel.operators) {
        Vector v(d * d);
        for (Eigen::Index c = 0; c < d; ++c)
            v.segment(c * d, d) = k.col(c);
        choi += v * v.adjoint();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (choi + choi.adjoint()),
                                                 Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("verify_cptp: Choi eigendecomposition did not converge");
    const double min_eig = solver.eigenvalues().minCoeff();
    const double cp_violation = min_eig < 0.0 ? -min_eig : 0.0;
    report.completely_positive = cp_violation < 1e-10;

    report.max_violation = std::max(tp_violation, cp_violation);
    return report;
}

// --------------------------- per-register noise model -------------------------

const QubitNoise NoiseModel::ideal_{};

void QubitNoise::validate() const {
    auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in01(depol_one_qubit) || !in01(depol_controlled))
        throw std::invalid_argument("QubitNoise: depolarizing probabilities must lie in [0, 1]");
    if (t1_us <= 0.0 || t2_us <= 0.0)
        throw std::invalid_argument("QubitNoise: T1 and T2 must be positive");
    if (t2_us > 2.0 * t1_us)
        throw std::invalid_argument("QubitNoise: T2 > 2*T1 is unphysical");
    if (!in01(equilibrium_excited_population) || !in01(initial_excited_population))
        throw std::invalid_argument("QubitNoise: populations must lie in [0, 1]");
    for (int r = 0; r < 2; ++r) {
        if (confusion(r, 0) < 0.0 || confusion(r, 1) < 0.0 ||
            std::abs(confusion(r, 0) + confusion(r, 1) - 1.0) > 1e-9)
            throw std::invalid_argument("QubitNoise: confusion rows must be stochastic");
    }
}

const QubitNoise& NoiseModel::qubit(int q) const {
    if (q < 0)
        throw std::invalid_argument("NoiseModel: negative qubit index");
    if (static_cast<std::size_t>(q) < qubits.size())
        return qubits[q];
    return ideal_;
}

bool NoiseModel::is_trivial() const {
    for (const QubitNoise& qn : qubits) {
        if (qn.depol_one_qubit != 0.0 || qn.depol_controlled != 0.0)
            return false;
        if (std::isfinite(qn.t1_us) || std::isfinite(qn.t2_us))
            return false;
        if (qn.initial_excited_population != 0.0)
            return false;
        if ((qn.confusion - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() != 0.0)
            return false;
    }
    return true;
}

void NoiseModel::validate() const {
    for (const QubitNoise& qn : qubits)
        qn.validate();
    if (one_qubit_gate_duration_us < 0.0 || controlled_gate_duration_us < 0.0)
        throw std::invalid_argument("NoiseModel: gate durations must be non-negative");
}

// --------------------------- synthetic bath ----------------------------------

void BathSpec::validate() const {
    if (spectator_freqs_ueV.size() != couplings_ueV.size())
        throw std::invalid_argument("BathSpec: frequency and coupling lists must match in length");
    for (double g : couplings_ueV)
        if (g < 0.0)
            throw std::invalid_argument("BathSpec: couplings must be non-negative");
    for (double w : spectator_freqs_ueV)
        if (w <= 0.0)
            throw std::invalid_argument("BathSpec: spectator frequencies must be positive");
}

std::vector<std::string> BathSpec::warnings() const {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < couplings_ueV.size(); ++k) {
        if (couplings_ueV[k] > 0.1 * spectator_freqs_ueV[k]) {
            std::ostringstream msg;
            msg << "spectator " << k << ": coupling g=" << couplings_ueV[k]
                << " ueV is not weak relative to omega=" << spectator_freqs_ueV[k]
                << " ueV (g/omega > 0.1)";
            out.push_back(msg.str());
        }
    }
    return out;
}

HermitianOperator build_bath_hamiltonian(double system_freq_ueV, const BathSpec& bath) {
    bath.validate();
    const int n = 1 + bath.num_spectators();
    if (n > max_register_qubits)
        throw std::invalid_argument("build_bath_hamiltonian: register exceeds capacity of " +
                                    std::to_string(max_register_qubits) + " qubits");
    const Eigen::Index dim = Eigen::Index(1) << n;
    Matrix h = Matrix::Zero(dim, dim);

    h += embed_operator(-(system_freq_ueV / 2.0) * sigma_z(), {0}, n);
    for (int k = 0; k < bath.num_spectators(); ++k) {
        h += embed_operator(-(bath.spectator_freqs_ueV[k] / 2.0) * sigma_z(), {k + 1}, n);
        const double g = bath.couplings_ueV[k];
        if (g == 0.0)
            continue;
        h += g * embed_operator(tensor_product(sigma_plus(), sigma_minus()), {0, k + 1}, n);
        h += g * embed_operator(tensor_product(sigma_minus(), sigma_plus()), {0, k + 1}, n);
    }
    return HermitianOperator(std::move(h));
}

} // namespace qwork
