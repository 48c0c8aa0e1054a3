#pragma once

// Exact per-trajectory evolution under H0 + H_ES + H1(t) with piecewise-constant
// classical noise, and deterministic parallel ensemble averaging.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "esmem/model.hpp"
#include "esmem/qlinalg.hpp"

namespace esmem {

// Spin component <I_iq>; qubit is 0-based, the label is 1-based ("I1x").
struct Observable {
    int qubit = 0;
    Axis axis = Axis::X;

    std::string label() const;
    static Observable parse(std::string_view label);
    friend bool operator==(const Observable&, const Observable&) = default;
};

struct EvolutionConfig {
    double dt = 0.01;
    double t_total = 1.0;
    std::size_t n_trajectories = 100;
    std::uint64_t master_seed = 1;
    ComplexMatrix initial_state;  // density matrix
    std::vector<Observable> observables;
    bool rotating_frame = true;   // report <I_iq> in the frame co-rotating with H0
    std::size_t record_every = 1;

    // The OU field is generated on a grid of dt / noise_oversample and held
    // constant over each step at its midpoint sample. Runs that share the noise
    // grid spacing share noise realizations, so dt can be refined at fixed noise.
    std::size_t noise_oversample = 2;
    // Trajectories are reduced in this many contiguous, fixed blocks.
    std::size_t n_batches = 16;
    // When set, every trajectory uses the noise of this trajectory index.
    std::optional<std::uint64_t> forced_noise_index;
    bool record_final_density = false;

    std::size_t n_steps() const;
    std::size_t n_records() const { return n_steps() / record_every + 1; }
    double noise_dt() const { return dt / static_cast<double>(noise_oversample); }
    // Throws ConfigInvalid naming the violated guard.
    void validate(const SystemParams& params) const;
};

inline constexpr double kStepResolutionGuard = 0.1;    // dt * max(omega0, J, gamma H) bound
inline constexpr double kNoiseResolutionGuard = 50.0;  // tau0 / dt lower bound
inline constexpr double kDriftAbort = 1e-8;

struct TrajectoryRecord {
    std::vector<std::vector<double>> values;  // [observable][record]
    double max_trace_drift = 0.0;
    double max_purity_drift = 0.0;
    std::optional<ComplexMatrix> final_density;
};

// Throws ConfigInvalid, or NumericalDrift if the trace leaves 1 by more than 1e-8.
TrajectoryRecord evolve_trajectory(const SystemParams& params, const EvolutionConfig& config,
                                   std::size_t trajectory_index);

struct EnsembleObservables {
    std::vector<double> t_grid;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> mean;       // [observable][record]
    std::vector<std::vector<double>> std_error;  // sample sd / sqrt(n)
    // Per-batch means for resampling error estimates: [batch][observable][record]
    std::vector<std::vector<std::vector<double>>> batch_mean;
    std::vector<std::size_t> batch_size;
    std::size_t n_trajectories = 0;
    double max_trace_drift = 0.0;
    double max_purity_drift = 0.0;
    std::optional<ComplexMatrix> final_density;  // ensemble-averaged rho(t_total)

    std::size_t observable_index(std::string_view label) const;
};

struct ParallelOptions {
    unsigned threads = 0;                  // 0 = hardware concurrency
    std::vector<std::size_t> batch_order;  // execution order; empty = natural
};

EnsembleObservables run_ensemble(const SystemParams& params, const EvolutionConfig& config,
                                 const ParallelOptions& options = {});

// Columns t,obs_label,mean,stderr
void write_timeseries_csv(std::ostream& out, const EnsembleObservables& obs);

}  // namespace esmem
