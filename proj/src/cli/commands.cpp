#include "esmem/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <ostream>
#include <random>

#include "esmem/codes.hpp"
#include "esmem/error.hpp"
#include "esmem/format.hpp"
#include "esmem/rng.hpp"

namespace esmem::cli {
namespace {

using nlohmann::json;

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json rates_to_json(const DecayRates& r) {
    return {{"inv_t2x", r.inv_t2x}, {"inv_t2y", r.inv_t2y}, {"inv_t1", r.inv_t1},
            {"inv_t2", r.inv_t2},   {"inv_t1_0", r.inv_t1_0}, {"inv_t2_0", r.inv_t2_0}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
}

std::filesystem::path prepare_out_dir(const RunConfig& config) {
    std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// Shared error-to-exit-code mapping for the file-driven commands.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NumericalDrift) {
            err << "numerical drift: " << e.what() << '\n';
            return kExitDrift;
        }
        if (e.code() == ErrorCode::ConfigInvalid || e.code() == ErrorCode::InvalidParams ||
            e.code() == ErrorCode::InvalidArgument) {
            err << "config error: " << e.what() << '\n';
            return kExitConfig;
        }
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace

void apply_overrides(RunConfig& config, const Overrides& o) {
    if (o.seed) config.evolution.master_seed = *o.seed;
    if (o.trajectories) config.evolution.n_trajectories = *o.trajectories;
    if (o.out_dir) config.out_dir = *o.out_dir;
    if (o.threads) config.threads = *o.threads;
}

json fit_to_json(const DecayFit& fit) {
    return {{"rate", fit.rate},
            {"rate_stderr", fit.rate_stderr},
            {"amplitude", fit.amplitude},
            {"window", {fit.window.t_min, fit.window.t_max}},
            {"goodness", std::isfinite(fit.goodness) ? json(fit.goodness) : json(nullptr)},
            {"goodness_flag", fit.goodness_flag},
            {"n_points", fit.n_points},
            {"jackknife_replicates", fit.n_resamples}};
}

json run_metadata(const RunConfig& config, const json& extra) {
    json meta{{"esmem_version", kVersion},
              {"created_utc", utc_timestamp()},
              {"config", to_json(config)},
              {"master_seed", config.evolution.master_seed},
              {"seed_derivation", kSeedDerivation},
              {"warnings", config.system.warnings()}};
    for (const auto& [k, v] : extra.items()) meta[k] = v;
    return meta;
}

SweepPointPlan plan_sweep_point(const RunConfig& base, double j_tau0) {
    if (!(j_tau0 >= 0.0)) throw ConfigError("j_tau0 values must be >= 0");
    SweepPointPlan plan;
    plan.j_tau0 = j_tau0;
    plan.params = base.system;
    plan.params.j_coupling = j_tau0 / base.system.noise.tau0;
    const DecayRates rates = rates_with_suppression(plan.params);
    if (!(rates.inv_t2 > 0.0)) throw ConfigError("sweep needs nonzero z-noise (analytic T2 is infinite)");
    plan.t2_analytic = 1.0 / rates.inv_t2;

    plan.evolution = base.evolution;
    auto& e = plan.evolution;
    const double field = plan.params.gamma * std::sqrt(plan.params.noise.max_amplitude_sq());
    const double fastest = std::max({plan.params.effective_omega0(), plan.params.j_coupling, field});
    if (fastest > 0.0) e.dt = std::min(e.dt, kStepResolutionGuard / fastest);
    e.t_total = base.sweep_horizon_t2 * plan.t2_analytic;
    const auto steps = static_cast<double>(e.n_steps());
    e.record_every = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(steps / static_cast<double>(base.sweep_target_records))));
    e.initial_state = base.evolution.initial_state;

    plan.fit = base.fit_request();
    plan.fit.window.reset();
    return plan;
}

SweepPointResult run_sweep_point(const SweepPointPlan& plan, unsigned threads) {
    const auto obs = run_ensemble(plan.params, plan.evolution, ParallelOptions{threads, {}});
    SweepPointResult r;
    r.j_tau0 = plan.j_tau0;
    r.fit = fit_ensemble_decay(obs, plan.fit);
    r.t2_fit = 1.0 / r.fit.rate;
    r.t2_fit_err = r.fit.rate_stderr / (r.fit.rate * r.fit.rate);
    r.t2_analytic = plan.t2_analytic;
    r.max_trace_drift = obs.max_trace_drift;
    r.max_purity_drift = obs.max_purity_drift;
    return r;
}

std::vector<SweepRow> run_sweep(const RunConfig& config, std::vector<double> j_tau0) {
    const auto& a = config.system.noise.amplitude_sq;
    if (a[index(Axis::X)] != 0.0 || a[index(Axis::Y)] != 0.0) {
        throw ConfigError("field 'noise_amplitude_sq': sweep requires z-noise only ([0, 0, z])");
    }
    if (config.system.n_qubits < 2) throw ConfigError("field 'n_qubits': sweep requires at least two qubits");
    j_tau0.push_back(0.0);
    std::sort(j_tau0.begin(), j_tau0.end());
    j_tau0.erase(std::unique(j_tau0.begin(), j_tau0.end()), j_tau0.end());

    std::vector<SweepRow> rows;
    for (double x : j_tau0) {
        SweepRow row;
        row.point = run_sweep_point(plan_sweep_point(config, x), config.threads);
        rows.push_back(row);
    }
    const auto& base = rows.front().point;  // j_tau0 = 0
    for (auto& row : rows) {
        const auto& p = row.point;
        row.ratio_fit = p.t2_fit / base.t2_fit;
        row.ratio_fit_err = row.ratio_fit * std::hypot(p.t2_fit_err / p.t2_fit, base.t2_fit_err / base.t2_fit);
        row.ratio_analytic = p.t2_analytic / base.t2_analytic;
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "j_tau0,t2_fit,t2_fit_err,t2_analytic,ratio_fit,ratio_fit_err,ratio_analytic\n";
    for (const auto& r : rows) {
        out << fmt_double(r.point.j_tau0) << ',' << fmt_double(r.point.t2_fit) << ',' << fmt_double(r.point.t2_fit_err)
            << ',' << fmt_double(r.point.t2_analytic) << ',' << fmt_double(r.ratio_fit) << ','
            << fmt_double(r.ratio_fit_err) << ',' << fmt_double(r.ratio_analytic) << '\n';
    }
}

SpectrumResult run_spectrum(const RunConfig& config) {
    const auto& noise = config.system.noise;
    noise.validate();
    const double dt = config.spectrum_step();
    const auto traj = ou_trajectory(noise, dt, config.spectrum_n_steps, config.evolution.master_seed,
                                    static_cast<std::size_t>(config.spectrum_qubit));
    std::vector<double> grid(config.spectrum_n_omega);
    const double w_max = config.spectrum_omega_max / noise.tau0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = w_max * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
    }
    SpectrumResult result;
    result.estimate = spectral_density_empirical(traj, static_cast<std::size_t>(config.spectrum_qubit - 1),
                                                 config.spectrum_axis, grid);
    for (double w : grid) result.analytic.push_back(spectral_density_analytic(noise, config.spectrum_axis, w));
    return result;
}

void write_spectrum_csv(std::ostream& out, const SpectrumResult& result) {
    out << "omega,k_empirical,k_analytic\n";
    for (std::size_t i = 0; i < result.analytic.size(); ++i) {
        out << fmt_double(result.estimate.omega[i]) << ',' << fmt_double(result.estimate.value[i]) << ','
            << fmt_double(result.analytic[i]) << '\n';
    }
}

int cmd_simulate(const std::filesystem::path& config_path, const Overrides& overrides, std::ostream& out,
                 std::ostream& err) {
    return guarded(err, [&] {
        RunConfig config = load_run_config(config_path);
        apply_overrides(config, overrides);
        for (const auto& w : config.system.warnings()) err << "warning: " << w << '\n';

        const auto obs = run_ensemble(config.system, config.evolution, ParallelOptions{config.threads, {}});
        const auto dir = prepare_out_dir(config);
        {
            std::ostringstream csv;
            write_timeseries_csv(csv, obs);
            write_text(dir / "timeseries.csv", csv.str());
        }

        const DecayRates analytic = rates_with_suppression(config.system);
        json fit_doc{{"observable", config.fit_observable}, {"master_seed", config.evolution.master_seed},
                     {"analytic", rates_to_json(analytic)}, {"config", to_json(config)}};
        try {
            const DecayFit fit = fit_ensemble_decay(obs, config.fit_request());
            fit_doc.update(fit_to_json(fit));
            out << config.fit_observable << " decay rate " << fmt_double(fit.rate) << " +/- "
                << fmt_double(fit.rate_stderr) << '\n';
        } catch (const Error& e) {
            fit_doc["error"] = e.what();
            out << "fit failed: " << e.what() << '\n';
        }
        write_text(dir / "fit.json", fit_doc.dump(2) + "\n");

        const json extra{{"command", "simulate"},
                         {"n_records", obs.t_grid.size()},
                         {"max_trace_drift", obs.max_trace_drift},
                         {"max_purity_drift", obs.max_purity_drift},
                         {"analytic", rates_to_json(analytic)}};
        write_text(dir / "meta.json", run_metadata(config, extra).dump(2) + "\n");
        out << "wrote " << (dir / "timeseries.csv").string() << ", fit.json, meta.json\n";
        return kExitOk;
    });
}

int cmd_sweep(const std::filesystem::path& config_path, const std::vector<double>& j_tau0, const Overrides& overrides,
              std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        RunConfig config = load_run_config(config_path);
        apply_overrides(config, overrides);
        const auto rows = run_sweep(config, j_tau0);
        const auto dir = prepare_out_dir(config);
        std::ostringstream csv;
        write_sweep_csv(csv, rows);
        write_text(dir / "sweep.csv", csv.str());

        json points = json::array();
        for (const auto& r : rows) {
            points.push_back({{"j_tau0", r.point.j_tau0},
                              {"fit", fit_to_json(r.point.fit)},
                              {"max_trace_drift", r.point.max_trace_drift},
                              {"max_purity_drift", r.point.max_purity_drift}});
        }
        write_text(dir / "meta.json",
                   run_metadata(config, json{{"command", "sweep"}, {"j_tau0", j_tau0}, {"points", points}}).dump(2) +
                       "\n");
        out << csv.str();
        return kExitOk;
    });
}

int cmd_table1(std::ostream& out, bool csv, bool exact) {
    const auto rows = comparison_table();
    if (csv) {
        write_table_csv(out, rows, exact);
    } else {
        write_table_text(out, rows, exact);
    }
    return kExitOk;
}

int cmd_spectrum(const std::filesystem::path& config_path, const Overrides& overrides, std::ostream& out,
                 std::ostream& err) {
    return guarded(err, [&] {
        RunConfig config = load_run_config(config_path);
        apply_overrides(config, overrides);
        const auto result = run_spectrum(config);
        const auto dir = prepare_out_dir(config);
        std::ostringstream csv;
        write_spectrum_csv(csv, result);
        write_text(dir / "spectrum.csv", csv.str());
        write_text(dir / "meta.json",
                   run_metadata(config, json{{"command", "spectrum"}, {"max_lag", result.estimate.max_lag}}).dump(2) +
                       "\n");
        out << csv.str();
        return kExitOk;
    });
}

int cmd_codes_roundtrip(std::size_t count, std::uint64_t seed, std::ostream& out) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    double max_error = 0.0;
    double min_g = 1.0;
    double max_g_after_flip = -1.0;
    const ComplexMatrix z2 = pauli_operator(2, 1, Axis::Z);
    for (std::size_t i = 0; i < count; ++i) {
        LogicalQubit q{{normal(rng), normal(rng)}, {normal(rng), normal(rng)}, Encoding::Bare};
        const double n = std::sqrt(std::norm(q.c0) + std::norm(q.c1));
        q.c0 /= n;
        q.c1 /= n;
        const StateVector enc = encode_two_qubit(q);
        const LogicalQubit dec = decode_two_qubit(enc);
        max_error = std::max({max_error, std::abs(dec.c0 - q.c0), std::abs(dec.c1 - q.c1)});
        min_g = std::min(min_g, measure_stabilizers(enc, Encoding::TwoQubitPhase)[0]);
        max_g_after_flip =
            std::max(max_g_after_flip, measure_stabilizers(z2.apply(enc), Encoding::TwoQubitPhase)[0]);
    }
    out << json{{"count", count},
                {"seed", seed},
                {"max_roundtrip_error", max_error},
                {"min_g_expectation", min_g},
                {"max_g_after_sigma2z", max_g_after_flip}}
               .dump(2)
        << '\n';
    return kExitOk;
}

int cmd_codes_syndrome(int n_qubits, int flip, std::ostream& out, std::ostream& err) {
    if (n_qubits != 2 && n_qubits != 3) {
        err << "error: --code must be two or three\n";
        return kExitConfig;
    }
    if (flip < 0 || flip > n_qubits) {
        err << "error: --flip must be 0 (none) or a qubit in 1.." << n_qubits << '\n';
        return kExitConfig;
    }
    StateVector psi = product_state(std::string(static_cast<std::size_t>(n_qubits), '+'));
    if (flip > 0) psi = pauli_operator(n_qubits, flip - 1, Axis::Z).apply(psi);
    const auto code = n_qubits == 2 ? Encoding::TwoQubitPhase : Encoding::ThreeQubitPhase;
    const auto values = measure_stabilizers(psi, code);
    json doc{{"code", n_qubits == 2 ? "two_qubit_phase" : "three_qubit_phase"}, {"flip", flip}};
    json syndrome = json::array();
    for (double v : values) syndrome.push_back(static_cast<int>(std::lround(v)));
    doc["syndrome"] = syndrome;
    doc["stabilizer_expectations"] = values;
    if (n_qubits == 3) {
        const auto c = correction_for({syndrome[0].get<int>(), syndrome[1].get<int>()});
        doc["corrected_qubit"] = c ? json(*c + 1) : json(nullptr);
    } else {
        doc["error_detected"] = syndrome[0].get<int>() == -1;
    }
    out << doc.dump(2) << '\n';
    return kExitOk;
}

int cmd_codes_active_mc(double epsilon, std::uint64_t rounds, std::uint64_t seed, std::ostream& out,
                        std::ostream& err) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0) || rounds == 0) {
        err << "error: need 0 <= epsilon <= 1 and rounds >= 1\n";
        return kExitConfig;
    }
    const auto s = run_active_correction_mc(epsilon, rounds, seed);
    out << json{{"epsilon", s.epsilon},
                {"rounds", s.rounds},
                {"failures", s.failures},
                {"estimated_rate", s.rate},
                {"binomial_stderr", s.stderr_binomial},
                {"exact_rate", exact_logical_failure(epsilon)},
                {"leading_order_rate", 3.0 * epsilon * epsilon},
                {"master_seed", s.master_seed}}
               .dump(2)
        << '\n';
    return kExitOk;
}

}  // namespace esmem::cli
