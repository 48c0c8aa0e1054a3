#pragma once

// Flat JSON run configuration shared by the simulate, sweep and spectrum
// commands. Natural units: hbar = 1, angular frequencies, J = 1 by convention.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "esmem/dynamics.hpp"
#include "esmem/fitting.hpp"
#include "esmem/model.hpp"

namespace esmem::cli {

// Configuration problem with a field name or line number in the message.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    SystemParams system;
    EvolutionConfig evolution;
    std::string initial_state = "++";

    std::string fit_observable = "I1x";
    std::optional<std::string> fit_quadrature;
    std::optional<double> fit_t_min;  // default 3 tau0
    std::optional<double> fit_t_max;  // default: end of usable signal

    std::string out_dir = "out";
    unsigned threads = 0;

    double sweep_horizon_t2 = 1.5;        // simulated time per sweep point, in analytic T2
    std::size_t sweep_target_records = 400;

    std::size_t spectrum_n_steps = 1'000'000;
    std::optional<double> spectrum_dt;    // default tau0 / 20
    Axis spectrum_axis = Axis::Z;
    int spectrum_qubit = 1;               // 1-based
    double spectrum_omega_max = 5.0;      // in units of 1 / tau0
    std::size_t spectrum_n_omega = 51;

    EnsembleFitRequest fit_request() const;
    double spectrum_step() const { return spectrum_dt.value_or(system.noise.tau0 / 20.0); }
};

// Throws ConfigError naming the offending field; unknown keys are rejected.
RunConfig parse_run_config(const nlohmann::json& doc);
// Accepts a config document or a meta.json written by a previous run.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config_text(const std::string& text);

// Every field, defaults included.
nlohmann::json to_json(const RunConfig& config);

}  // namespace esmem::cli
