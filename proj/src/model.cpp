#include "esmem/model.hpp"

#include <cmath>

#include "esmem/error.hpp"

namespace esmem {
namespace {

ComplexMatrix axis_pauli(Axis axis) {
    switch (axis) {
        case Axis::X: return pauli_x();
        case Axis::Y: return pauli_y();
        case Axis::Z: return pauli_z();
    }
    return ComplexMatrix::identity(2);
}

void check_qubit(int n_qubits, int qubit) {
    if (n_qubits < 1 || n_qubits > 3) throw Error(ErrorCode::InvalidParams, "n_qubits must be 1, 2 or 3");
    if (qubit < 0 || qubit >= n_qubits) {
        throw Error(ErrorCode::InvalidArgument, "qubit index " + std::to_string(qubit) + " out of range");
    }
}

}  // namespace

void SystemParams::validate() const {
    if (n_qubits < 1 || n_qubits > 3) throw Error(ErrorCode::InvalidParams, "n_qubits must be 1, 2 or 3");
    if (!(omega0 >= 0.0) || !std::isfinite(omega0)) throw Error(ErrorCode::InvalidParams, "omega0 must be >= 0");
    if (!(j_coupling >= 0.0) || !std::isfinite(j_coupling)) {
        throw Error(ErrorCode::InvalidParams, "j_coupling must be >= 0");
    }
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw Error(ErrorCode::InvalidParams, "gamma must be >= 0");
    noise.validate();
}

std::vector<std::string> SystemParams::warnings() const {
    std::vector<std::string> out;
    if (frame_mode != FrameMode::LabFrame) return out;
    if (omega0 < 10.0 * j_coupling) {
        out.push_back("LabFrame: omega0 < 10 * j_coupling, rotating-wave separation is weak");
    }
    if (gamma * std::sqrt(noise.max_amplitude_sq()) > j_coupling / 5.0) {
        out.push_back("LabFrame: gamma * field amplitude > j_coupling / 5, noise is not perturbative");
    }
    return out;
}

ComplexMatrix pauli_operator(int n_qubits, int qubit, Axis axis) {
    check_qubit(n_qubits, qubit);
    ComplexMatrix out = ComplexMatrix::identity(1);
    for (int k = 0; k < n_qubits; ++k) {
        out = kron(out, k == qubit ? axis_pauli(axis) : ComplexMatrix::identity(2));
    }
    return out;
}

ComplexMatrix spin_operator(int n_qubits, int qubit, Axis axis) {
    return Complex{0.5, 0.0} * pauli_operator(n_qubits, qubit, axis);
}

ComplexMatrix build_h0(const SystemParams& params) {
    params.validate();
    ComplexMatrix h = ComplexMatrix::zero(params.dim());
    const double w0 = params.effective_omega0();
    if (w0 == 0.0) return h;
    for (int i = 0; i < params.n_qubits; ++i) h += Complex{w0, 0.0} * spin_operator(params.n_qubits, i, Axis::Z);
    return h;
}

ComplexMatrix build_hes(const SystemParams& params) {
    params.validate();
    if (params.n_qubits < 2) throw Error(ErrorCode::NotApplicable, "H_ES needs at least two qubits");
    ComplexMatrix h = ComplexMatrix::zero(params.dim());
    for (int i = 0; i + 1 < params.n_qubits; ++i) {
        h += Complex{-2.0 * params.j_coupling, 0.0} *
             (spin_operator(params.n_qubits, i, Axis::X) * spin_operator(params.n_qubits, i + 1, Axis::X));
    }
    return h;
}

ComplexMatrix build_noise_hamiltonian(const SystemParams& params, std::span<const std::array<double, 3>> fields) {
    params.validate();
    if (fields.size() != static_cast<std::size_t>(params.n_qubits)) {
        throw Error(ErrorCode::InvalidArgument, "expected one field vector per qubit");
    }
    ComplexMatrix h = ComplexMatrix::zero(params.dim());
    for (int i = 0; i < params.n_qubits; ++i)
        for (Axis a : kAxes) {
            const double f = fields[i][index(a)];
            if (!std::isfinite(f)) throw Error(ErrorCode::InvalidArgument, "field values must be finite");
            if (f != 0.0) h += Complex{params.gamma * f, 0.0} * spin_operator(params.n_qubits, i, a);
        }
    return h;
}

ComplexMatrix k_operator(const SystemParams& params, int qubit, Axis axis, double t) {
    if (params.n_qubits != 2) throw Error(ErrorCode::NotApplicable, "K operators are defined for two qubits");
    check_qubit(2, qubit);
    const int other = 1 - qubit;
    const double c = std::cos(params.j_coupling * t);
    const double s = std::sin(params.j_coupling * t);
    const auto I = [](int q, Axis a) { return spin_operator(2, q, a); };
    switch (axis) {
        case Axis::X:
            return I(qubit, Axis::X);
        case Axis::Y:
            return Complex{c, 0.0} * I(qubit, Axis::Y) + Complex{2.0 * s, 0.0} * (I(qubit, Axis::Z) * I(other, Axis::X));
        case Axis::Z:
            return Complex{c, 0.0} * I(qubit, Axis::Z) - Complex{2.0 * s, 0.0} * (I(qubit, Axis::Y) * I(other, Axis::X));
    }
    return {};
}

StateVector product_state(std::string_view labels) {
    if (labels.empty()) throw Error(ErrorCode::InvalidArgument, "empty product-state label");
    const double r = 1.0 / std::sqrt(2.0);
    StateVector psi{Complex{1.0, 0.0}};
    for (char c : labels) {
        StateVector single;
        switch (c) {
            case '0': single = {1.0, 0.0}; break;
            case '1': single = {0.0, 1.0}; break;
            case '+': single = {r, r}; break;
            case '-': single = {r, -r}; break;
            case 'r': single = {r, Complex{0.0, r}}; break;
            case 'l': single = {r, Complex{0.0, -r}}; break;
            default:
                throw Error(ErrorCode::InvalidArgument, std::string("unknown single-qubit state '") + c + "'");
        }
        psi = kron(psi, single);
    }
    return psi;
}

ComplexMatrix product_state_density(std::string_view labels) {
    return ComplexMatrix::projector(product_state(labels));
}

}  // namespace esmem
