#include "esmem/analytic.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "esmem/error.hpp"
#include "esmem/format.hpp"

namespace esmem {
namespace {

double k(const SystemParams& p, Axis axis, double omega) {
    return spectral_density_analytic(p.noise, axis, omega);
}

// Table cells are exact integers up to 3e6; print them without an exponent.
std::string table_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

DecayRates rates_with_suppression(const SystemParams& params) {
    params.validate();
    const double g2 = params.gamma * params.gamma;
    const double w0 = params.effective_omega0();
    const double j = params.j_coupling;
    const double kyy_split = 0.5 * (k(params, Axis::Y, w0 + j) + k(params, Axis::Y, w0 - j));

    const DecayRates base = rates_baseline(params);
    DecayRates r = base;
    r.inv_t2x = g2 * (kyy_split + k(params, Axis::Z, j));
    r.inv_t2y = g2 * (k(params, Axis::X, w0) + k(params, Axis::Z, j));
    r.inv_t1 = g2 * (k(params, Axis::X, w0) + kyy_split);
    r.inv_t2 = 0.5 * (r.inv_t2x + r.inv_t2y);
    return r;
}

DecayRates rates_baseline(const SystemParams& params) {
    params.validate();
    const double g2 = params.gamma * params.gamma;
    const double w0 = params.effective_omega0();
    DecayRates r;
    r.inv_t1_0 = g2 * (k(params, Axis::X, w0) + k(params, Axis::Y, w0));
    r.inv_t2_0 = 0.5 * r.inv_t1_0 + g2 * k(params, Axis::Z, 0.0);
    r.inv_t2x = g2 * (k(params, Axis::Y, w0) + k(params, Axis::Z, 0.0));
    r.inv_t2y = g2 * (k(params, Axis::X, w0) + k(params, Axis::Z, 0.0));
    r.inv_t1 = r.inv_t1_0;
    r.inv_t2 = r.inv_t2_0;
    return r;
}

double enhancement(double j_tau0) {
    if (!(j_tau0 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "j_tau0 must be >= 0");
    return 1.0 + j_tau0 * j_tau0;
}

double phase_flip_probability(const ActiveCorrectionParams& p) {
    if (!(p.dt_interval > 0.0) || !(p.t2_0 > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "dt_interval and t2_0 must be > 0");
    }
    return -std::expm1(-p.dt_interval / p.t2_0);
}

namespace {

double effective_t2_from_failure(double dt_interval, double failure) {
    if (failure >= 1.0) {
        throw Error(ErrorCode::Saturated, "per-round logical failure " + std::to_string(failure) + " >= 1");
    }
    if (failure <= 0.0) return std::numeric_limits<double>::infinity();
    return -dt_interval / std::log1p(-failure);
}

}  // namespace

double active_correction_effective_t2(const ActiveCorrectionParams& p) {
    const double eps = phase_flip_probability(p);
    return effective_t2_from_failure(p.dt_interval, 3.0 * eps * eps);
}

double exact_logical_failure(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must lie in [0, 1]");
    return 3.0 * epsilon * epsilon * (1.0 - epsilon) + epsilon * epsilon * epsilon;
}

double active_correction_effective_t2_exact(const ActiveCorrectionParams& p) {
    return effective_t2_from_failure(p.dt_interval, exact_logical_failure(phase_flip_probability(p)));
}

ComparisonRow comparison_row(double target) {
    if (!(target > 1.0)) throw Error(ErrorCode::InvalidArgument, "enhancement must exceed 1");
    ComparisonRow row;
    row.enhancement = target;
    row.j_tau0_exact = std::sqrt(target - 1.0);
    row.j_tau0 = std::pow(10.0, std::round(std::log10(row.j_tau0_exact)));
    // small eps: T2eff / T2^0 = T2^0 / (3 dt)
    row.t2_0_over_dt = 3.0 * target;

    // T2eff / T2^0 decreases monotonically in x = dt / T2^0; bisect in log x.
    auto ratio = [](double x) { return active_correction_effective_t2({x, 1.0}); };
    double lo = 1e-12;
    double hi = 0.5;
    while (ratio(hi) > target) hi *= 0.5;
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        (ratio(mid) > target ? lo : hi) = mid;
    }
    row.t2_0_over_dt_exact = 1.0 / std::sqrt(lo * hi);
    return row;
}

std::vector<ComparisonRow> comparison_table() {
    return {comparison_row(1e2), comparison_row(1e4), comparison_row(1e6)};
}

void write_table_csv(std::ostream& out, const std::vector<ComparisonRow>& rows, bool with_exact) {
    out << "enhancement,j_tau0,t2_0_over_dt";
    if (with_exact) out << ",j_tau0_exact,t2_0_over_dt_exact";
    out << '\n';
    for (const auto& r : rows) {
        out << table_number(r.enhancement) << ',' << table_number(r.j_tau0) << ',' << table_number(r.t2_0_over_dt);
        if (with_exact) out << ',' << fmt_double(r.j_tau0_exact) << ',' << fmt_double(r.t2_0_over_dt_exact);
        out << '\n';
    }
}

void write_table_text(std::ostream& out, const std::vector<ComparisonRow>& rows, bool with_exact) {
    char line[160];
    std::snprintf(line, sizeof line, "%-14s %-12s %-14s", "T2/T2^0", "J*tau0", "T2^0/dt");
    out << line;
    if (with_exact) {
        std::snprintf(line, sizeof line, " %-14s %-14s", "J*tau0 exact", "T2^0/dt exact");
        out << line;
    }
    out << '\n';
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%-14s %-12s %-14s", table_number(r.enhancement).c_str(),
                      table_number(r.j_tau0).c_str(), table_number(r.t2_0_over_dt).c_str());
        out << line;
        if (with_exact) {
            std::snprintf(line, sizeof line, " %-14.6f %-14.6g", r.j_tau0_exact, r.t2_0_over_dt_exact);
            out << line;
        }
        out << '\n';
    }
}

}  // namespace esmem
