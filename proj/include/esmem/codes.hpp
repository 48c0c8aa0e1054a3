#pragma once

// Two-qubit phase-flip detecting code {|++>, |-->} and the three-qubit
// phase-flip correcting code {|+++>, |--->}.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "esmem/qlinalg.hpp"

namespace esmem {

enum class Encoding { Bare, TwoQubitPhase, ThreeQubitPhase };

struct LogicalQubit {
    Complex c0{1.0, 0.0};
    Complex c1{0.0, 0.0};
    Encoding encoding = Encoding::Bare;

    bool is_normalized(double tolerance = tol::kAlgebraic) const;
};

// Controlled-NOT acting in the |+>/|-> basis: flips qubit 2 between |+> and |->
// when qubit 1 is |->. Equals (H x H) CNOT (H x H).
ComplexMatrix rotated_cnot();

// H on qubit 1, qubit 2 prepared in |+>, rotated CNOT: c0|++> + c1|-->.
StateVector encode_two_qubit(const LogicalQubit& q);

// Reverse circuit. Throws OutOfCodeSpace when the code-space overlap is
// below 1 - 1e-9.
LogicalQubit decode_two_qubit(std::span<const Complex> state);

double code_space_overlap(std::span<const Complex> state);

// <sigma_1x sigma_2x> (two-qubit) or {<s1x s2x>, <s2x s3x>} (three-qubit).
std::vector<double> measure_stabilizers(std::span<const Complex> state, Encoding code);

struct CorrectionRoundResult {
    std::array<int, 2> syndrome{1, 1};
    std::optional<int> applied_correction;  // 0-based qubit
    bool logical_error = false;
};

// Syndrome (-1,+1) -> qubit 0, (-1,-1) -> qubit 1, (+1,-1) -> qubit 2.
std::optional<int> correction_for(std::array<int, 2> syndrome);

// One storage interval of the three-qubit code: independent sigma_z on each
// qubit with probability epsilon, stabilizer measurement with projection,
// majority-vote correction, then a logical check via <X1 X2 X3>.
CorrectionRoundResult active_correction_round(double epsilon, std::uint64_t seed);

struct ActiveCorrectionSummary {
    double epsilon = 0.0;
    std::uint64_t rounds = 0;
    std::uint64_t failures = 0;
    double rate = 0.0;
    double stderr_binomial = 0.0;
    std::uint64_t master_seed = 0;
};

// Round r uses seed splitmix64(master ^ splitmix64(r)).
ActiveCorrectionSummary run_active_correction_mc(double epsilon, std::uint64_t rounds, std::uint64_t master_seed);

}  // namespace esmem
