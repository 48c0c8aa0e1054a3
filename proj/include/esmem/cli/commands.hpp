#pragma once

// Experiment orchestration behind the esmem command line. Every command
// returns a process exit code: 0 success, 2 invalid configuration or options,
// 3 numerical-drift abort, 1 any other failure.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "esmem/analytic.hpp"
#include "esmem/cli/config.hpp"
#include "esmem/fitting.hpp"

namespace esmem::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDrift = 3;

inline constexpr const char* kVersion = "esmem 1.0.0";

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trajectories;
    std::optional<std::string> out_dir;
    std::optional<unsigned> threads;
};

void apply_overrides(RunConfig& config, const Overrides& overrides);

nlohmann::json fit_to_json(const DecayFit& fit);
nlohmann::json run_metadata(const RunConfig& config, const nlohmann::json& extra);

// One point of the enhancement sweep: J = j_tau0 / tau0, step clamped by the
// step-resolution guard, horizon = sweep_horizon_t2 analytic decay times.
struct SweepPointPlan {
    double j_tau0 = 0.0;
    SystemParams params;
    EvolutionConfig evolution;
    EnsembleFitRequest fit;
    double t2_analytic = 0.0;
};

SweepPointPlan plan_sweep_point(const RunConfig& base, double j_tau0);

struct SweepPointResult {
    double j_tau0 = 0.0;
    DecayFit fit;
    double t2_fit = 0.0;
    double t2_fit_err = 0.0;
    double t2_analytic = 0.0;
    double max_trace_drift = 0.0;
    double max_purity_drift = 0.0;
};

SweepPointResult run_sweep_point(const SweepPointPlan& plan, unsigned threads);

struct SweepRow {
    SweepPointResult point;
    double ratio_fit = 0.0;
    double ratio_fit_err = 0.0;
    double ratio_analytic = 0.0;
};

// Always includes the J = 0 baseline that normalizes the ratios.
std::vector<SweepRow> run_sweep(const RunConfig& config, std::vector<double> j_tau0);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct SpectrumResult {
    SpectrumEstimate estimate;
    std::vector<double> analytic;
};
SpectrumResult run_spectrum(const RunConfig& config);
void write_spectrum_csv(std::ostream& out, const SpectrumResult& result);

int cmd_simulate(const std::filesystem::path& config_path, const Overrides& overrides, std::ostream& out,
                 std::ostream& err);
int cmd_sweep(const std::filesystem::path& config_path, const std::vector<double>& j_tau0, const Overrides& overrides,
              std::ostream& out, std::ostream& err);
int cmd_table1(std::ostream& out, bool csv, bool exact);
int cmd_spectrum(const std::filesystem::path& config_path, const Overrides& overrides, std::ostream& out,
                 std::ostream& err);

int cmd_codes_roundtrip(std::size_t count, std::uint64_t seed, std::ostream& out);
// flip: 0 = no error, otherwise the 1-based qubit receiving sigma_z
int cmd_codes_syndrome(int n_qubits, int flip, std::ostream& out, std::ostream& err);
int cmd_codes_active_mc(double epsilon, std::uint64_t rounds, std::uint64_t seed, std::ostream& out,
                        std::ostream& err);

}  // namespace esmem::cli
