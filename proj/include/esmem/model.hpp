#pragma once

// Hamiltonians of the naturally error-suppressing memory, hbar = 1:
//   H0     = omega0 * sum_i I_iz
//   H_ES   = -2 J * sum_{adjacent i} I_ix I_{i+1,x}
//   H1(t)  = gamma * sum_{i,q} H_iq(t) I_iq
// Qubit indices are 0-based in the API; qubit 0 is the most significant
// tensor factor.

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "esmem/noise.hpp"
#include "esmem/qlinalg.hpp"

namespace esmem {

enum class FrameMode { EffectiveZeroSplitting, LabFrame };

struct SystemParams {
    int n_qubits = 2;
    double omega0 = 0.0;
    double j_coupling = 1.0;
    double gamma = 1.0;
    NoiseParams noise;
    FrameMode frame_mode = FrameMode::EffectiveZeroSplitting;

    void validate() const;                   // throws InvalidParams
    std::vector<std::string> warnings() const;  // LabFrame scale-hierarchy checks
    // Splitting that actually enters H0 (zero in EffectiveZeroSplitting mode).
    double effective_omega0() const noexcept {
        return frame_mode == FrameMode::LabFrame ? omega0 : 0.0;
    }
    std::size_t dim() const noexcept { return std::size_t{1} << n_qubits; }
};

// I_iq = sigma_iq / 2 embedded in the n-qubit space.
ComplexMatrix spin_operator(int n_qubits, int qubit, Axis axis);
// sigma_iq embedded in the n-qubit space.
ComplexMatrix pauli_operator(int n_qubits, int qubit, Axis axis);

// Product state from per-qubit labels in {0,1,+,-,r,l} (r, l are the +/-y
// eigenstates), e.g. "++" or "0+-".
StateVector product_state(std::string_view labels);
ComplexMatrix product_state_density(std::string_view labels);

ComplexMatrix build_h0(const SystemParams& params);

// Throws NotApplicable for a single qubit.
ComplexMatrix build_hes(const SystemParams& params);

ComplexMatrix build_noise_hamiltonian(const SystemParams& params, std::span<const std::array<double, 3>> fields);

// Closed-form interaction-picture operator e^{+i H_ES t} I_iq e^{-i H_ES t}
// for the two-qubit memory:
//   K_ix = I_ix
//   K_iy = I_iy cos Jt + 2 I_iz I_jx sin Jt
//   K_iz = I_iz cos Jt - 2 I_iy I_jx sin Jt      (j = the other qubit)
ComplexMatrix k_operator(const SystemParams& params, int qubit, Axis axis, double t);

}  // namespace esmem
