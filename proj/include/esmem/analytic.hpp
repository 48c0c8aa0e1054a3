#pragma once

// Closed-form decay rates of the error-suppressed memory and of the active
// three-qubit phase-flip correction it is compared against.

#include <iosfwd>
#include <vector>

#include "esmem/model.hpp"

namespace esmem {

enum class RateProvenance { Analytic, Fitted };

struct DecayRates {
    double inv_t2x = 0.0;
    double inv_t2y = 0.0;
    double inv_t1 = 0.0;
    double inv_t2 = 0.0;
    double inv_t1_0 = 0.0;  // without the coupling
    double inv_t2_0 = 0.0;
    RateProvenance provenance = RateProvenance::Analytic;
};

// With k_qq the OU spectral density of axis q, w0 = effective_omega0():
//   1/T2x = g^2 [ (k_yy(w0+J) + k_yy(w0-J))/2 + k_zz(J) ]
//   1/T2y = g^2 [ k_xx(w0) + k_zz(J) ]
//   1/T1  = g^2 [ k_xx(w0) + (k_yy(w0+J) + k_yy(w0-J))/2 ]
//   1/T2  = (1/T2x + 1/T2y)/2 = 1/(2 T1) + g^2 k_zz(J)
// The baseline fields are filled as well (rates_baseline).
DecayRates rates_with_suppression(const SystemParams& params);

// The same rates with J = 0:  1/T1^0 = g^2 [k_xx(w0) + k_yy(w0)],
// 1/T2^0 = 1/(2 T1^0) + g^2 k_zz(0).
DecayRates rates_baseline(const SystemParams& params);

// T2 / T2^0 = k_zz(0) / k_zz(J) = 1 + (J tau0)^2 when T1^0 is negligible.
double enhancement(double j_tau0);

struct ActiveCorrectionParams {
    double dt_interval = 0.0;  // time between correction rounds
    double t2_0 = 1.0;         // bare decay time
};

// eps = 1 - exp(-dt / T2^0)
double phase_flip_probability(const ActiveCorrectionParams& p);

// 3 eps^2 = 1 - exp(-dt / T2eff). Throws Saturated when 3 eps^2 >= 1.
double active_correction_effective_t2(const ActiveCorrectionParams& p);

// Majority-vote failure per round for three independent flips of probability eps.
double exact_logical_failure(double epsilon);
// Same as active_correction_effective_t2 with the exact failure 3 eps^2 (1 - eps) + eps^3.
double active_correction_effective_t2_exact(const ActiveCorrectionParams& p);

struct ComparisonRow {
    double enhancement = 0.0;   // T2 / T2^0
    double j_tau0 = 0.0;        // order of magnitude needed by natural suppression
    double t2_0_over_dt = 0.0;  // corrections per T2^0 under the small-eps law
    double j_tau0_exact = 0.0;        // sqrt(enhancement - 1)
    double t2_0_over_dt_exact = 0.0;  // root of active_correction_effective_t2 = enhancement * T2^0
};

// Rows for enhancement 1e2, 1e4, 1e6.
std::vector<ComparisonRow> comparison_table();
ComparisonRow comparison_row(double enhancement);

void write_table_csv(std::ostream& out, const std::vector<ComparisonRow>& rows, bool with_exact = false);
void write_table_text(std::ostream& out, const std::vector<ComparisonRow>& rows, bool with_exact = false);

}  // namespace esmem
