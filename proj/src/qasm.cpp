// qasm.cpp — OpenQASM 3 rendering and exact one-qubit gate decomposition.

#include "qwork/qasm.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qwork {

// --------------------------- one-qubit decomposition ---------------------------

OneQubitGateParams decompose_one_qubit_unitary(const Matrix& v) {
    if (v.rows() != 2 || v.cols() != 2)
        throw std::invalid_argument("decompose_one_qubit_unitary: matrix must be 2x2");
    if (max_abs_diff(v.adjoint() * v, identity(2)) > 1e-10)
        throw std::invalid_argument("decompose_one_qubit_unitary: matrix is not unitary");

    OneQubitGateParams p;
    const double c = std::abs(v(0, 0));
    const double s = std::abs(v(1, 0));
    p.theta = 2.0 * std::atan2(s, c);

    constexpr double eps = 1e-12;
    if (s < eps) {
        // Diagonal: V = e^{i gamma} diag(1, e^{i(phi+lambda)}).
        p.gamma = std::arg(v(0, 0));
        p.phi = 0.0;
        p.lambda = std::arg(v(1, 1)) - p.gamma;
    } else if (c < eps) {
        // Antidiagonal: V = e^{i gamma} [[0, -e^{i lambda}], [e^{i phi}, 0]].
        p.gamma = std::arg(v(1, 0));
        p.phi = 0.0;
        p.lambda = std::arg(-v(0, 1)) - p.gamma;
    } else {
        p.gamma = std::arg(v(0, 0));
        p.phi = std::arg(v(1, 0)) - p.gamma;
        p.lambda = std::arg(-v(0, 1)) - p.gamma;
    }
    return p;
}

Matrix one_qubit_unitary_from_params(const OneQubitGateParams& p) {
    const double ch = std::cos(p.theta / 2.0);
    const double sh = std::sin(p.theta / 2.0);
    Matrix u(2, 2);
    u << ch, -std::exp(Complex(0.0, p.lambda)) * sh,
        std::exp(Complex(0.0, p.phi)) * sh, std::exp(Complex(0.0, p.phi + p.lambda)) * ch;
    return std::exp(Complex(0.0, p.gamma)) * u;
}

// --------------------------- rendering -----------------------------------------

namespace {

std::string fmt(double x) {
    if (x == 0.0)
        x = 0.0; // normalize -0
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string qreg(int q) { return "q[" + std::to_string(q) + "]"; }

std::string join_qubits(const std::vector<int>& qs) {
    std::string out;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        if (i)
            out += ", ";
        out += qreg(qs[i]);
    }
    return out;
}

std::string u_gate(const OneQubitGateParams& p) {
    return "U(" + fmt(p.theta) + ", " + fmt(p.phi) + ", " + fmt(p.lambda) + ")";
}

// Accumulates the emitted program: custom gate declarations go into a prelude
// so every definition precedes its first use.
struct Emitter {
    std::ostringstream prelude;
    std::ostringstream body;
    int custom_count = 0;

    // Emits an uncontrolled 2x2 unitary on one qubit.
    void one_qubit(const Matrix& v, int qubit, const std::string& note) {
        const OneQubitGateParams p = decompose_one_qubit_unitary(v);
        if (!note.empty())
            body << "// " << note << "\n";
        body << u_gate(p) << ' ' << qreg(qubit) << ";\n";
        if (std::abs(p.gamma) > 1e-12)
            body << "gphase(" << fmt(p.gamma) << ");\n";
    }

    // Emits a controlled 2x2 unitary: ctrl/negctrl @ U(...) plus the payload's
    // global phase as a phase gate on the control line.
    void controlled_one_qubit(const Matrix& v, int control, int control_value, int target,
                              const std::string& note) {
        const OneQubitGateParams p = decompose_one_qubit_unitary(v);
        if (!note.empty())
            body << "// " << note << "\n";
        body << (control_value == 1 ? "ctrl" : "negctrl") << " @ " << u_gate(p) << ' '
             << qreg(control) << ", " << qreg(target) << ";\n";
        if (std::abs(p.gamma) > 1e-12) {
            if (control_value == 1) {
                body << "p(" << fmt(p.gamma) << ") " << qreg(control) << ";\n";
            } else {
                // Phase on the control-0 branch: diag(e^{ig}, 1) = e^{ig} p(-g).
                body << "gphase(" << fmt(p.gamma) << ");\n";
                body << "p(" << fmt(-p.gamma) << ") " << qreg(control) << ";\n";
            }
        }
    }

    // Emits a payload too large for U(theta, phi, lambda): a named gate whose
    // matrix is documented in the adjacent comment block. The empty body is a
    // carrier for the matrix, not an executable definition.
    void matrix_carrier(const Matrix& v, const std::vector<int>& targets,
                        std::optional<std::pair<int, int>> control, const std::string& note) {
        const std::string name = "dense_unitary_" + std::to_string(custom_count++);
        prelude << "// " << name << " on " << targets.size()
                << " qubit(s): unitary matrix, row-major, entries re<sign>im*i:\n";
        for (Eigen::Index r = 0; r < v.rows(); ++r) {
            prelude << "//   ";
            for (Eigen::Index col = 0; col < v.cols(); ++col) {
                const Complex z = v(r, col);
                prelude << fmt(z.real()) << (z.imag() < 0.0 ? "-" : "+")
                        << fmt(std::abs(z.imag())) << "i";
                if (col + 1 < v.cols())
                    prelude << ' ';
            }
            prelude << '\n';
        }
        prelude << "gate " << name;
        for (std::size_t i = 0; i < targets.size(); ++i)
            prelude << (i ? ", " : " ") << "_t" << i;
        prelude << " { }\n\n";

        if (!note.empty())
            body << "// " << note << "\n";
        if (control) {
            std::vector<int> qs = {control->first};
            qs.insert(qs.end(), targets.begin(), targets.end());
            body << (control->second == 1 ? "ctrl" : "negctrl") << " @ " << name << ' '
                 << join_qubits(qs) << ";\n";
        } else {
            body << name << ' ' << join_qubits(targets) << ";\n";
        }
    }
};

const char* role_name(QubitRole r) {
    switch (r) {
    case QubitRole::System:
        return "system";
    case QubitRole::Bath:
        return "bath";
    case QubitRole::Ancilla:
        return "ancilla";
    }
    return "?";
}

// Identity-pad a 2x2 drive across the remaining payload qubits.
Matrix pad_drive(const Matrix& drive, std::size_t num_payload_qubits) {
    if (num_payload_qubits == 1)
        return drive;
    return tensor_product(drive, identity(Eigen::Index(1) << (num_payload_qubits - 1)));
}

void emit_controlled(Emitter& em, const Gate& g) {
    const auto [cq, cv] = *g.control;
    const std::string branch = "control " + qreg(cq) + " == " + std::to_string(cv);

    if (!g.factors) {
        if (g.targets.size() == 1)
            em.controlled_one_qubit(g.payload, cq, cv, g.targets[0], g.label + ": " + branch);
        else
            em.matrix_carrier(g.payload, g.targets, g.control, g.label + ": " + branch);
        return;
    }

    // Factorized rendering: the drive and the delay evolution appear as
    // separate controlled gates (same control), in application order.
    const PayloadFactors& f = *g.factors;
    const Matrix drive_padded = pad_drive(f.drive, g.targets.size());
    // Recover the evolution factor from the composed payload.
    const Matrix evolution = f.delay_after_drive ? Matrix(g.payload * drive_padded.adjoint())
                                                 : Matrix(drive_padded.adjoint() * g.payload);

    auto emit_drive = [&] {
        em.controlled_one_qubit(f.drive, cq, cv, g.targets[0],
                                g.label + ": drive factor, " + branch);
    };
    auto emit_delay = [&] {
        if (f.delay == 0.0) {
            em.body << "// " << g.label << ": delay factor is identity at u = 0 (omitted)\n";
            return;
        }
        const std::string note =
            g.label + ": delay-evolution factor, u = " + fmt(f.delay) + " (1/ueV), " + branch;
        if (g.targets.size() == 1)
            em.controlled_one_qubit(evolution, cq, cv, g.targets[0], note);
        else
            em.matrix_carrier(evolution, g.targets, g.control, note);
    };

    if (f.delay_after_drive) {
        emit_drive();
        emit_delay();
    } else {
        emit_delay();
        emit_drive();
    }
}

} // namespace

std::string to_qasm3(const CircuitSpec& circuit, const std::string& header_comment) {
    circuit.validate();
    Emitter em;

    for (const Gate& g : circuit.gates) {
        switch (g.kind) {
        case GateKind::Hadamard:
            em.body << "h " << qreg(g.targets[0]) << ";\n";
            break;
        case GateKind::PauliX:
            em.body << "x " << qreg(g.targets[0]) << ";\n";
            break;
        case GateKind::SqrtX:
            em.body << "sx " << qreg(g.targets[0]) << ";\n";
            break;
        case GateKind::Unitary:
        case GateKind::DelayEvolution:
            if (g.is_controlled()) {
                emit_controlled(em, g);
            } else if (g.targets.size() == 1) {
                em.one_qubit(g.payload, g.targets[0], g.label);
            } else {
                em.matrix_carrier(g.payload, g.targets, std::nullopt, g.label);
            }
            break;
        case GateKind::ControlledUnitary:
            emit_controlled(em, g);
            break;
        }
    }

    std::ostringstream out;
    out << "OPENQASM 3.0;\n";
    out << "include \"stdgates.inc\";\n\n";
    if (!header_comment.empty()) {
        std::istringstream lines(header_comment);
        std::string line;
        while (std::getline(lines, line))
            out << "// " << line << '\n';
    }
    out << "// delay parameter u = " << fmt(circuit.delay_u) << " (1/ueV); readout basis: "
        << (circuit.basis == MeasBasis::Z ? "Z" : "Y") << '\n';
    out << "// register roles:";
    for (int q = 0; q < circuit.num_qubits; ++q)
        out << (q ? "," : "") << " q[" << q << "] " << role_name(circuit.roles[q]);
    out << "\n\n";
    out << "qubit[" << circuit.num_qubits << "] q;\n";
    out << "bit[1] c;\n\n";
    const std::string prelude = em.prelude.str();
    if (!prelude.empty())
        out << prelude;
    out << em.body.str();
    if (circuit.measured_qubit >= 0)
        out << "c[0] = measure " << qreg(circuit.measured_qubit) << ";\n";
    return out.str();
}

} // namespace qwork
