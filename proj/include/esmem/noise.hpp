#pragma once

// Stationary Ornstein-Uhlenbeck realizations of classical fluctuating fields and
// their spectral densities, k(w) = (1/2) * integral C(tau) exp(-i w tau) dtau.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace esmem {

enum class Axis : int { X = 0, Y = 1, Z = 2 };
inline constexpr std::array<Axis, 3> kAxes{Axis::X, Axis::Y, Axis::Z};

constexpr std::size_t index(Axis a) noexcept { return static_cast<std::size_t>(a); }
char axis_name(Axis a) noexcept;
Axis parse_axis(std::string_view name);

enum class QubitCorrelation { Independent, Identical };

struct NoiseParams {
    std::array<double, 3> amplitude_sq{0.0, 0.0, 0.0};  // field variance per axis
    double tau0 = 1.0;                                  // correlation time
    QubitCorrelation correlation = QubitCorrelation::Independent;

    void validate() const;  // throws InvalidParams
    bool is_silent() const noexcept;
    double max_amplitude_sq() const noexcept;
};

struct NoiseTrajectory {
    NoiseParams params;
    double dt = 0.0;
    std::size_t n_qubits = 0;
    std::size_t n_steps = 0;
    std::vector<double> samples;  // [qubit][axis][step], sample n at t = n * dt

    std::span<const double> series(std::size_t qubit, Axis axis) const;
    double at(std::size_t qubit, Axis axis, std::size_t step) const { return series(qubit, axis)[step]; }
};

// Exact discrete OU update for one field channel, started from the stationary
// distribution:  x' = x e^{-dt/tau0} + sigma sqrt(1 - e^{-2 dt/tau0}) xi.
class OuProcess {
public:
    OuProcess(double amplitude_sq, double tau0, double dt, std::uint64_t seed);

    double value() const noexcept { return value_; }
    double advance();

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    double decay_;
    double kick_;
    double value_;
};

NoiseTrajectory ou_trajectory(const NoiseParams& params, double dt, std::size_t n_steps, std::uint64_t seed,
                              std::size_t n_qubits = 1, std::uint64_t trajectory_index = 0);

double spectral_density_analytic(const NoiseParams& params, Axis axis, double omega);

// Unbiased sample autocovariance (mean removed) for lags 0..max_lag.
std::vector<double> autocovariance(std::span<const double> series, std::size_t max_lag);

struct SpectrumEstimate {
    std::vector<double> omega;
    std::vector<double> value;      // real part of the estimate
    std::vector<double> imag;       // imaginary residue of the symmetric-lag transform
    std::size_t max_lag = 0;
};

// Lag-window estimate with cutoff 10 tau0 and a cosine roll-off over the last
// fifth of the window. Throws TooShort below 50 tau0 / dt samples.
SpectrumEstimate spectral_density_empirical(const NoiseTrajectory& traj, std::size_t qubit, Axis axis,
                                            std::span<const double> omega_grid);

void write_trajectory_csv(std::ostream& out, const NoiseTrajectory& traj);

}  // namespace esmem
