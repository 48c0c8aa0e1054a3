#include "esmem/codes.hpp"

#include <cmath>
#include <string>

#include "esmem/error.hpp"
#include "esmem/model.hpp"
#include "esmem/rng.hpp"

namespace esmem {
namespace {

constexpr double kCodeSpaceTolerance = 1e-9;

ComplexMatrix cnot() {
    ComplexMatrix m(4);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(2, 3) = 1.0;
    m(3, 2) = 1.0;
    return m;
}

const ComplexMatrix& hadamard_on_first() {
    static const ComplexMatrix m = kron(hadamard(), ComplexMatrix::identity(2));
    return m;
}

struct ThreeQubitOps {
    ComplexMatrix g12 = pauli_operator(3, 0, Axis::X) * pauli_operator(3, 1, Axis::X);
    ComplexMatrix g23 = pauli_operator(3, 1, Axis::X) * pauli_operator(3, 2, Axis::X);
    ComplexMatrix logical_x =
        pauli_operator(3, 0, Axis::X) * pauli_operator(3, 1, Axis::X) * pauli_operator(3, 2, Axis::X);
};

const ThreeQubitOps& three_qubit_ops() {
    static const ThreeQubitOps ops;
    return ops;
}

void apply_phase_flip(StateVector& psi, int qubit, int n_qubits) {
    const std::size_t bit = std::size_t{1} << (n_qubits - 1 - qubit);
    for (std::size_t i = 0; i < psi.size(); ++i)
        if (i & bit) psi[i] = -psi[i];
}

// Projective measurement of a Pauli-product observable; returns the outcome.
int measure_and_project(StateVector& psi, const ComplexMatrix& g, SplitMix64& rng) {
    const double e = g.expectation(psi).real();
    int outcome;
    if (e >= 1.0 - tol::kAlgebraic) {
        outcome = 1;
    } else if (e <= -1.0 + tol::kAlgebraic) {
        outcome = -1;
    } else {
        outcome = rng.uniform() < 0.5 * (1.0 + e) ? 1 : -1;
    }
    const StateVector gpsi = g.apply(psi);
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = 0.5 * (psi[i] + static_cast<double>(outcome) * gpsi[i]);
    const double n = std::sqrt(norm_sq(psi));
    for (auto& z : psi) z /= n;
    return outcome;
}

}  // namespace

bool LogicalQubit::is_normalized(double tolerance) const {
    return std::abs(std::norm(c0) + std::norm(c1) - 1.0) <= tolerance;
}

ComplexMatrix rotated_cnot() {
    const ComplexMatrix hh = kron(hadamard(), hadamard());
    return hh * cnot() * hh;
}

StateVector encode_two_qubit(const LogicalQubit& q) {
    if (q.encoding != Encoding::Bare) throw Error(ErrorCode::InvalidArgument, "encode expects a bare logical qubit");
    if (!q.is_normalized()) throw Error(ErrorCode::InvalidArgument, "logical qubit is not normalized");
    const StateVector qubit1{q.c0, q.c1};
    const StateVector qubit2 = product_state("+");
    StateVector psi = kron(std::span<const Complex>(qubit1), std::span<const Complex>(qubit2));
    psi = hadamard_on_first().apply(psi);
    return rotated_cnot().apply(psi);
}

double code_space_overlap(std::span<const Complex> state) {
    if (state.size() != 4) throw Error(ErrorCode::InvalidArgument, "expected a two-qubit state");
    const StateVector pp = product_state("++");
    const StateVector mm = product_state("--");
    return std::norm(inner(pp, state)) + std::norm(inner(mm, state));
}

LogicalQubit decode_two_qubit(std::span<const Complex> state) {
    const double overlap = code_space_overlap(state);
    if (overlap < 1.0 - kCodeSpaceTolerance) {
        throw Error(ErrorCode::OutOfCodeSpace, "code-space overlap " + std::to_string(overlap));
    }
    StateVector psi = rotated_cnot().apply(state);
    psi = hadamard_on_first().apply(psi);
    // qubit 2 is now |+>; read qubit 1 from <x, +|psi>
    const double r = 1.0 / std::sqrt(2.0);
    LogicalQubit out;
    out.c0 = r * (psi[0] + psi[1]);
    out.c1 = r * (psi[2] + psi[3]);
    out.encoding = Encoding::Bare;
    return out;
}

std::vector<double> measure_stabilizers(std::span<const Complex> state, Encoding code) {
    switch (code) {
        case Encoding::TwoQubitPhase: {
            if (state.size() != 4) throw Error(ErrorCode::InvalidArgument, "expected a two-qubit state");
            static const ComplexMatrix g = pauli_operator(2, 0, Axis::X) * pauli_operator(2, 1, Axis::X);
            return {g.expectation(state).real()};
        }
        case Encoding::ThreeQubitPhase: {
            if (state.size() != 8) throw Error(ErrorCode::InvalidArgument, "expected a three-qubit state");
            const auto& ops = three_qubit_ops();
            return {ops.g12.expectation(state).real(), ops.g23.expectation(state).real()};
        }
        case Encoding::Bare: break;
    }
    throw Error(ErrorCode::InvalidArgument, "a bare qubit has no stabilizers");
}

std::optional<int> correction_for(std::array<int, 2> syndrome) {
    if (syndrome[0] == -1 && syndrome[1] == 1) return 0;
    if (syndrome[0] == -1 && syndrome[1] == -1) return 1;
    if (syndrome[0] == 1 && syndrome[1] == -1) return 2;
    return std::nullopt;
}

CorrectionRoundResult active_correction_round(double epsilon, std::uint64_t seed) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must lie in [0, 1]");
    SplitMix64 rng(seed);
    const auto& ops = three_qubit_ops();

    StateVector psi = product_state("+++");
    for (int q = 0; q < 3; ++q)
        if (rng.uniform() < epsilon) apply_phase_flip(psi, q, 3);

    CorrectionRoundResult result;
    result.syndrome = {measure_and_project(psi, ops.g12, rng), measure_and_project(psi, ops.g23, rng)};
    result.applied_correction = correction_for(result.syndrome);
    if (result.applied_correction) apply_phase_flip(psi, *result.applied_correction, 3);
    result.logical_error = ops.logical_x.expectation(psi).real() < 0.0;
    return result;
}

ActiveCorrectionSummary run_active_correction_mc(double epsilon, std::uint64_t rounds, std::uint64_t master_seed) {
    if (rounds == 0) throw Error(ErrorCode::InvalidArgument, "rounds must be >= 1");
    ActiveCorrectionSummary s;
    s.epsilon = epsilon;
    s.rounds = rounds;
    s.master_seed = master_seed;
    for (std::uint64_t r = 0; r < rounds; ++r) {
        if (active_correction_round(epsilon, splitmix64_mix(master_seed ^ splitmix64_mix(r))).logical_error) {
            ++s.failures;
        }
    }
    const double n = static_cast<double>(rounds);
    s.rate = static_cast<double>(s.failures) / n;
    s.stderr_binomial = std::sqrt(s.rate * (1.0 - s.rate) / n);
    return s;
}

}  // namespace esmem
