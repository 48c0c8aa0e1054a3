#include "esmem/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "esmem/error.hpp"
#include "esmem/format.hpp"
#include "esmem/rng.hpp"

namespace esmem {

char axis_name(Axis a) noexcept {
    switch (a) {
        case Axis::X: return 'x';
        case Axis::Y: return 'y';
        case Axis::Z: return 'z';
    }
    return '?';
}

Axis parse_axis(std::string_view name) {
    if (name == "x" || name == "X") return Axis::X;
    if (name == "y" || name == "Y") return Axis::Y;
    if (name == "z" || name == "Z") return Axis::Z;
    throw Error(ErrorCode::InvalidArgument, "unknown axis '" + std::string(name) + "'");
}

void NoiseParams::validate() const {
    for (Axis a : kAxes) {
        const double v = amplitude_sq[index(a)];
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw Error(ErrorCode::InvalidParams, std::string("amplitude_sq[") + axis_name(a) + "] must be >= 0");
        }
    }
    if (!(tau0 > 0.0) || !std::isfinite(tau0)) throw Error(ErrorCode::InvalidParams, "tau0 must be > 0");
}

bool NoiseParams::is_silent() const noexcept {
    return std::all_of(amplitude_sq.begin(), amplitude_sq.end(), [](double v) { return v == 0.0; });
}

double NoiseParams::max_amplitude_sq() const noexcept {
    return *std::max_element(amplitude_sq.begin(), amplitude_sq.end());
}

std::span<const double> NoiseTrajectory::series(std::size_t qubit, Axis axis) const {
    if (qubit >= n_qubits) throw Error(ErrorCode::InvalidArgument, "qubit index out of range");
    return std::span<const double>(samples).subspan((qubit * 3 + index(axis)) * n_steps, n_steps);
}

OuProcess::OuProcess(double amplitude_sq, double tau0, double dt, std::uint64_t seed)
    : engine_(seed),
      decay_(std::exp(-dt / tau0)),
      kick_(std::sqrt(amplitude_sq) * std::sqrt(-std::expm1(-2.0 * dt / tau0))),
      value_(std::sqrt(amplitude_sq) * normal_(engine_)) {
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidParams, "dt must be > 0");
    if (!(tau0 > 0.0)) throw Error(ErrorCode::InvalidParams, "tau0 must be > 0");
}

double OuProcess::advance() {
    value_ = value_ * decay_ + kick_ * normal_(engine_);
    return value_;
}

NoiseTrajectory ou_trajectory(const NoiseParams& params, double dt, std::size_t n_steps, std::uint64_t seed,
                              std::size_t n_qubits, std::uint64_t trajectory_index) {
    params.validate();
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidParams, "dt must be > 0");
    if (n_steps < 1) throw Error(ErrorCode::InvalidParams, "n_steps must be >= 1");
    if (n_qubits < 1) throw Error(ErrorCode::InvalidParams, "n_qubits must be >= 1");

    NoiseTrajectory traj{params, dt, n_qubits, n_steps, std::vector<double>(n_qubits * 3 * n_steps, 0.0)};
    for (std::size_t q = 0; q < n_qubits; ++q) {
        const std::size_t source_qubit = params.correlation == QubitCorrelation::Identical ? 0 : q;
        for (Axis a : kAxes) {
            const double var = params.amplitude_sq[index(a)];
            if (var == 0.0) continue;
            OuProcess ou(var, params.tau0, dt, derive_seed(seed, source_qubit, index(a), trajectory_index));
            double* out = traj.samples.data() + (q * 3 + index(a)) * n_steps;
            out[0] = ou.value();
            for (std::size_t n = 1; n < n_steps; ++n) out[n] = ou.advance();
        }
    }
    return traj;
}

double spectral_density_analytic(const NoiseParams& params, Axis axis, double omega) {
    const double wt = omega * params.tau0;
    return params.amplitude_sq[index(axis)] * params.tau0 / (1.0 + wt * wt);
}

std::vector<double> autocovariance(std::span<const double> series, std::size_t max_lag) {
    const std::size_t n = series.size();
    if (n == 0) return {};
    max_lag = std::min(max_lag, n - 1);
    double mean = 0.0;
    for (double x : series) mean += x;
    mean /= static_cast<double>(n);
    std::vector<double> centered(series.begin(), series.end());
    for (double& x : centered) x -= mean;

    std::vector<double> cov(max_lag + 1, 0.0);
    for (std::size_t m = 0; m <= max_lag; ++m) {
        double acc = 0.0;
        const std::size_t count = n - m;
        for (std::size_t i = 0; i < count; ++i) acc += centered[i] * centered[i + m];
        cov[m] = acc / static_cast<double>(count);
    }
    return cov;
}

SpectrumEstimate spectral_density_empirical(const NoiseTrajectory& traj, std::size_t qubit, Axis axis,
                                            std::span<const double> omega_grid) {
    const double tau0 = traj.params.tau0;
    const double min_len = 50.0 * tau0 / traj.dt;
    if (static_cast<double>(traj.n_steps) < min_len) {
        throw Error(ErrorCode::TooShort, "trajectory has " + std::to_string(traj.n_steps) + " samples, needs >= " +
                                             std::to_string(static_cast<std::size_t>(std::ceil(min_len))));
    }
    const auto max_lag = static_cast<std::size_t>(std::ceil(10.0 * tau0 / traj.dt));
    const auto cov = autocovariance(traj.series(qubit, axis), max_lag);
    const std::size_t lags = cov.size() - 1;

    // flat to 0.8 L, then a half-cosine down to zero at L
    const double flat = 0.8 * static_cast<double>(lags);
    std::vector<double> weighted(cov.size());
    for (std::size_t m = 0; m <= lags; ++m) {
        const double md = static_cast<double>(m);
        double w = 1.0;
        if (md > flat && lags > 0) {
            w = 0.5 * (1.0 + std::cos(std::numbers::pi * (md - flat) / (static_cast<double>(lags) - flat)));
        }
        weighted[m] = w * cov[m];
    }

    SpectrumEstimate est;
    est.max_lag = lags;
    est.omega.assign(omega_grid.begin(), omega_grid.end());
    est.value.reserve(omega_grid.size());
    est.imag.reserve(omega_grid.size());
    for (double omega : omega_grid) {
        double re = weighted[0];
        double im = 0.0;
        for (std::size_t m = 1; m <= lags; ++m) {
            const double phase = omega * static_cast<double>(m) * traj.dt;
            // lags +m and -m of the even autocovariance
            re += weighted[m] * (std::cos(-phase) + std::cos(phase));
            im += weighted[m] * (std::sin(-phase) + std::sin(phase));
        }
        est.value.push_back(0.5 * traj.dt * re);
        est.imag.push_back(0.5 * traj.dt * im);
    }
    return est;
}

void write_trajectory_csv(std::ostream& out, const NoiseTrajectory& traj) {
    out << "t,qubit,axis,value\n";
    for (std::size_t q = 0; q < traj.n_qubits; ++q)
        for (Axis a : kAxes) {
            const auto s = traj.series(q, a);
            for (std::size_t n = 0; n < traj.n_steps; ++n) {
                out << fmt_double(static_cast<double>(n) * traj.dt) << ',' << (q + 1) << ',' << axis_name(a) << ','
                    << fmt_double(s[n]) << '\n';
            }
        }
}

}  // namespace esmem
