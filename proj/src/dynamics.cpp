#include "esmem/dynamics.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "esmem/error.hpp"
#include "esmem/format.hpp"
#include "esmem/rng.hpp"

namespace esmem {
namespace {

constexpr std::size_t kMaxDim = 8;
using Amplitudes = std::array<Complex, kMaxDim>;

[[noreturn]] void config_error(const std::string& message) { throw Error(ErrorCode::ConfigInvalid, message); }

// Everything shared by the trajectories of one run.
struct Plan {
    std::size_t dim = 0;
    int n_qubits = 0;
    std::size_t n_steps = 0;
    std::size_t n_records = 0;
    std::array<Complex, kMaxDim * kMaxDim> half_step{};  // e^{-i (H0 + H_ES) dt / 2}
    std::vector<double> weights;                     // eigen-decomposition of rho(0)
    std::vector<Amplitudes> components;
    // observable matrices per record: [observable][record or 0] (dim x dim, row-major)
    std::vector<std::vector<std::vector<Complex>>> observables;
    bool time_dependent_observables = false;
    std::vector<std::array<bool, 3>> active_axes;  // per qubit
};

Plan make_plan(const SystemParams& params, const EvolutionConfig& config) {
    config.validate(params);
    Plan plan;
    plan.dim = params.dim();
    plan.n_qubits = params.n_qubits;
    plan.n_steps = config.n_steps();
    plan.n_records = config.n_records();

    ComplexMatrix h_static = build_h0(params);
    if (params.n_qubits >= 2) h_static += build_hes(params);
    const ComplexMatrix u = expm_hermitian(h_static, Complex{0.0, -0.5 * config.dt});
    for (std::size_t r = 0; r < plan.dim; ++r)
        for (std::size_t c = 0; c < plan.dim; ++c) plan.half_step[r * kMaxDim + c] = u(r, c);

    const auto eig = eigh(config.initial_state);
    for (std::size_t k = 0; k < plan.dim; ++k) {
        if (eig.values[k] <= 1e-14) continue;
        Amplitudes psi{};
        for (std::size_t r = 0; r < plan.dim; ++r) psi[r] = eig.vectors(r, k);
        plan.weights.push_back(eig.values[k]);
        plan.components.push_back(psi);
    }
    const double total = std::accumulate(plan.weights.begin(), plan.weights.end(), 0.0);
    for (double& w : plan.weights) w /= total;

    // Rotating frame: <I>* = Tr(rho e^{-i H0 t} I e^{+i H0 t}); H0 is diagonal.
    const double w0 = params.effective_omega0();
    plan.time_dependent_observables = config.rotating_frame && w0 != 0.0;
    const ComplexMatrix h0 = build_h0(params);
    for (const auto& o : config.observables) {
        const ComplexMatrix op = spin_operator(params.n_qubits, o.qubit, o.axis);
        std::vector<std::vector<Complex>> per_record;
        const std::size_t count = plan.time_dependent_observables ? plan.n_records : 1;
        for (std::size_t rec = 0; rec < count; ++rec) {
            const double t = static_cast<double>(rec * config.record_every) * config.dt;
            std::vector<Complex> m(plan.dim * plan.dim);
            for (std::size_t a = 0; a < plan.dim; ++a)
                for (std::size_t b = 0; b < plan.dim; ++b) {
                    const double de = h0(a, a).real() - h0(b, b).real();
                    m[a * plan.dim + b] =
                        plan.time_dependent_observables ? op(a, b) * std::polar(1.0, -de * t) : op(a, b);
                }
            per_record.push_back(std::move(m));
        }
        plan.observables.push_back(std::move(per_record));
    }

    plan.active_axes.resize(params.n_qubits);
    for (int q = 0; q < params.n_qubits; ++q)
        for (Axis a : kAxes)
            plan.active_axes[q][index(a)] = params.gamma != 0.0 && params.noise.amplitude_sq[index(a)] > 0.0;
    return plan;
}

void apply_dense(const std::array<Complex, kMaxDim * kMaxDim>& u, std::size_t dim, Amplitudes& psi) {
    Amplitudes out{};
    for (std::size_t r = 0; r < dim; ++r) {
        Complex acc{0.0, 0.0};
        const Complex* row = u.data() + r * kMaxDim;
        for (std::size_t c = 0; c < dim; ++c) acc += row[c] * psi[c];
        out[r] = acc;
    }
    psi = out;
}

void apply_single_qubit(const std::array<Complex, 4>& u, int qubit, int n_qubits, std::size_t dim,
                        Amplitudes& psi) {
    const std::size_t stride = std::size_t{1} << (n_qubits - 1 - qubit);
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & stride) continue;
        const Complex a = psi[i];
        const Complex b = psi[i + stride];
        psi[i] = u[0] * a + u[1] * b;
        psi[i + stride] = u[2] * a + u[3] * b;
    }
}

double expectation(const std::vector<Complex>& op, std::size_t dim, const Amplitudes& psi) {
    Complex acc{0.0, 0.0};
    for (std::size_t a = 0; a < dim; ++a) {
        Complex row{0.0, 0.0};
        for (std::size_t b = 0; b < dim; ++b) row += op[a * dim + b] * psi[b];
        acc += std::conj(psi[a]) * row;
    }
    return acc.real();
}

struct Drift {
    double trace = 0.0;
    double purity = 0.0;
};

Drift measure_drift(const Plan& plan, const std::vector<Amplitudes>& states) {
    double trace = 0.0;
    double purity = 0.0;
    double purity0 = 0.0;
    for (std::size_t k = 0; k < states.size(); ++k) {
        double nk = 0.0;
        for (std::size_t r = 0; r < plan.dim; ++r) nk += std::norm(states[k][r]);
        trace += plan.weights[k] * nk;
        purity0 += plan.weights[k] * plan.weights[k];
        for (std::size_t l = 0; l < states.size(); ++l) {
            Complex ov{0.0, 0.0};
            for (std::size_t r = 0; r < plan.dim; ++r) ov += std::conj(states[k][r]) * states[l][r];
            purity += plan.weights[k] * plan.weights[l] * std::norm(ov);
        }
    }
    return {std::abs(trace - 1.0), std::abs(purity - purity0)};
}

TrajectoryRecord evolve_with_plan(const Plan& plan, const SystemParams& params, const EvolutionConfig& config,
                                  std::size_t trajectory_index) {
    const std::uint64_t noise_index = config.forced_noise_index.value_or(trajectory_index);
    const double noise_dt = config.noise_dt();
    const std::size_t half = config.noise_oversample / 2;

    // one OU stream per active (qubit, axis); identical-correlation qubits reuse qubit 0's seed
    struct Channel {
        int qubit;
        Axis axis;
        OuProcess process;
    };
    std::vector<Channel> channels;
    for (int q = 0; q < plan.n_qubits; ++q)
        for (Axis a : kAxes) {
            if (!plan.active_axes[q][index(a)]) continue;
            const std::uint64_t source_qubit =
                params.noise.correlation == QubitCorrelation::Identical ? 0 : static_cast<std::uint64_t>(q);
            channels.push_back({q, a,
                                OuProcess(params.noise.amplitude_sq[index(a)], params.noise.tau0, noise_dt,
                                          derive_seed(config.master_seed, source_qubit, index(a), noise_index))});
        }

    std::vector<Amplitudes> states = plan.components;
    TrajectoryRecord record;
    record.values.assign(config.observables.size(), std::vector<double>(plan.n_records, 0.0));

    auto observe = [&](std::size_t rec) {
        for (std::size_t o = 0; o < plan.observables.size(); ++o) {
            const auto& op = plan.observables[o][plan.time_dependent_observables ? rec : 0];
            double v = 0.0;
            for (std::size_t k = 0; k < states.size(); ++k) v += plan.weights[k] * expectation(op, plan.dim, states[k]);
            record.values[o][rec] = v;
        }
        const Drift d = measure_drift(plan, states);
        record.max_trace_drift = std::max(record.max_trace_drift, d.trace);
        record.max_purity_drift = std::max(record.max_purity_drift, d.purity);
        if (d.trace > kDriftAbort) {
            std::ostringstream msg;
            msg << "trace drifted by " << d.trace << " in trajectory " << trajectory_index;
            throw Error(ErrorCode::NumericalDrift, msg.str());
        }
    };

    observe(0);
    std::vector<std::array<double, 3>> field(plan.n_qubits);
    for (std::size_t step = 0; step < plan.n_steps; ++step) {
        for (auto& f : field) f = {0.0, 0.0, 0.0};
        for (auto& ch : channels) {
            for (std::size_t i = 0; i < half; ++i) ch.process.advance();
            field[ch.qubit][index(ch.axis)] = ch.process.value();
            for (std::size_t i = 0; i < half; ++i) ch.process.advance();
        }

        for (auto& psi : states) apply_dense(plan.half_step, plan.dim, psi);
        for (int q = 0; q < plan.n_qubits; ++q) {
            const auto& f = field[q];
            const double magnitude = std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]);
            if (magnitude == 0.0) continue;
            const std::array<double, 3> axis{f[0] / magnitude, f[1] / magnitude, f[2] / magnitude};
            const auto u = su2_elements(axis, params.gamma * magnitude * config.dt);
            for (auto& psi : states) apply_single_qubit(u, q, plan.n_qubits, plan.dim, psi);
        }
        for (auto& psi : states) apply_dense(plan.half_step, plan.dim, psi);

        if ((step + 1) % config.record_every == 0) observe((step + 1) / config.record_every);
    }

    if (config.record_final_density) {
        ComplexMatrix rho(plan.dim);
        for (std::size_t k = 0; k < states.size(); ++k)
            for (std::size_t r = 0; r < plan.dim; ++r)
                for (std::size_t c = 0; c < plan.dim; ++c)
                    rho(r, c) += plan.weights[k] * states[k][r] * std::conj(states[k][c]);
        record.final_density = std::move(rho);
    }
    return record;
}

// Running mean / M2 for one (observable, record) cell.
struct Moments {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        count += 1.0;
        const double delta = x - mean;
        mean += delta / count;
        m2 += delta * (x - mean);
    }

    void merge(const Moments& other) {
        if (other.count == 0.0) return;
        const double n = count + other.count;
        const double delta = other.mean - mean;
        mean += delta * other.count / n;
        m2 += other.m2 + delta * delta * count * other.count / n;
        count = n;
    }
};

struct BatchResult {
    std::vector<std::vector<Moments>> moments;  // [observable][record]
    double max_trace_drift = 0.0;
    double max_purity_drift = 0.0;
    std::optional<ComplexMatrix> density_sum;
    std::size_t size = 0;
};

BatchResult run_batch(const Plan& plan, const SystemParams& params, const EvolutionConfig& config,
                      std::size_t first, std::size_t last) {
    BatchResult out;
    out.size = last - first;
    out.moments.assign(config.observables.size(), std::vector<Moments>(plan.n_records));
    for (std::size_t traj = first; traj < last; ++traj) {
        const auto rec = evolve_with_plan(plan, params, config, traj);
        for (std::size_t o = 0; o < rec.values.size(); ++o)
            for (std::size_t r = 0; r < plan.n_records; ++r) out.moments[o][r].add(rec.values[o][r]);
        out.max_trace_drift = std::max(out.max_trace_drift, rec.max_trace_drift);
        out.max_purity_drift = std::max(out.max_purity_drift, rec.max_purity_drift);
        if (rec.final_density) {
            if (!out.density_sum) out.density_sum = ComplexMatrix(plan.dim);
            *out.density_sum += *rec.final_density;
        }
    }
    return out;
}

}  // namespace

std::string Observable::label() const {
    return "I" + std::to_string(qubit + 1) + axis_name(axis);
}

Observable Observable::parse(std::string_view label) {
    if (label.size() != 3 || (label[0] != 'I' && label[0] != 'i') || label[1] < '1' || label[1] > '9') {
        throw Error(ErrorCode::InvalidArgument, "observable label must look like I1x, got '" + std::string(label) + "'");
    }
    return {label[1] - '1', parse_axis(label.substr(2, 1))};
}

std::size_t EvolutionConfig::n_steps() const {
    if (!(dt > 0.0)) return 0;
    return static_cast<std::size_t>(std::llround(t_total / dt));
}

void EvolutionConfig::validate(const SystemParams& params) const {
    try {
        params.validate();
    } catch (const Error& e) {
        config_error(e.what());
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) config_error("dt must be > 0");
    if (!(t_total > 0.0) || !std::isfinite(t_total)) config_error("t_total must be > 0");
    if (n_steps() < 1) config_error("t_total must cover at least one step of dt");
    if (n_trajectories < 1) config_error("n_trajectories must be >= 1");
    if (record_every < 1) config_error("record_every must be >= 1");
    if (noise_oversample < 2 || noise_oversample % 2 != 0) config_error("noise_oversample must be even and >= 2");
    if (n_batches < 1) config_error("n_batches must be >= 1");
    if (observables.empty()) config_error("at least one observable is required");
    for (const auto& o : observables) {
        if (o.qubit < 0 || o.qubit >= params.n_qubits) config_error("observable " + o.label() + " names a missing qubit");
    }
    if (initial_state.dim() != params.dim()) {
        config_error("initial_state has dimension " + std::to_string(initial_state.dim()) + ", expected " +
                     std::to_string(params.dim()));
    }
    if (!initial_state.is_density_matrix(tol::kValidation)) config_error("initial_state is not a density matrix");

    const double field = params.gamma * std::sqrt(params.noise.max_amplitude_sq());
    const double fastest = std::max({params.effective_omega0(), params.j_coupling, field});
    if (dt * fastest > kStepResolutionGuard * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "step-resolution guard violated: dt * max(omega0, J, gamma*H) = " << dt * fastest << " > "
            << kStepResolutionGuard;
        config_error(msg.str());
    }
    if (!params.noise.is_silent() && dt > params.noise.tau0 / kNoiseResolutionGuard * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "noise-resolution guard violated: dt = " << dt << " > tau0 / " << kNoiseResolutionGuard << " = "
            << params.noise.tau0 / kNoiseResolutionGuard;
        config_error(msg.str());
    }
}

TrajectoryRecord evolve_trajectory(const SystemParams& params, const EvolutionConfig& config,
                                   std::size_t trajectory_index) {
    const Plan plan = make_plan(params, config);
    return evolve_with_plan(plan, params, config, trajectory_index);
}

std::size_t EnsembleObservables::observable_index(std::string_view label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return i;
    throw Error(ErrorCode::InvalidArgument, "observable '" + std::string(label) + "' was not recorded");
}

EnsembleObservables run_ensemble(const SystemParams& params, const EvolutionConfig& config,
                                 const ParallelOptions& options) {
    if (config.n_trajectories < 2) config_error("run_ensemble needs n_trajectories >= 2");
    const Plan plan = make_plan(params, config);

    const std::size_t n_batches = std::min(config.n_batches, config.n_trajectories);
    std::vector<std::size_t> order = options.batch_order;
    if (order.empty()) {
        order.resize(n_batches);
        std::iota(order.begin(), order.end(), std::size_t{0});
    } else {
        auto sorted = order;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i)
            if (sorted[i] != i || sorted.size() != n_batches) {
                throw Error(ErrorCode::InvalidArgument, "batch_order must be a permutation of the batches");
            }
    }
    const auto batch_bounds = [&](std::size_t b) {
        return std::pair{b * config.n_trajectories / n_batches, (b + 1) * config.n_trajectories / n_batches};
    };

    std::vector<BatchResult> results(n_batches);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t slot = next.fetch_add(1);
            if (slot >= order.size()) return;
            const std::size_t b = order[slot];
            try {
                const auto [first, last] = batch_bounds(b);
                results[b] = run_batch(plan, params, config, first, last);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(order.size());
                return;
            }
        }
    };

    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_batches));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    // fixed-order merge: output does not depend on scheduling
    EnsembleObservables out;
    out.n_trajectories = config.n_trajectories;
    for (const auto& o : config.observables) out.labels.push_back(o.label());
    for (std::size_t r = 0; r < plan.n_records; ++r) {
        out.t_grid.push_back(static_cast<double>(r * config.record_every) * config.dt);
    }
    const std::size_t n_obs = config.observables.size();
    std::vector<std::vector<Moments>> total(n_obs, std::vector<Moments>(plan.n_records));
    for (std::size_t b = 0; b < n_batches; ++b) {
        const auto& res = results[b];
        std::vector<std::vector<double>> bm(n_obs, std::vector<double>(plan.n_records));
        for (std::size_t o = 0; o < n_obs; ++o)
            for (std::size_t r = 0; r < plan.n_records; ++r) {
                total[o][r].merge(res.moments[o][r]);
                bm[o][r] = res.moments[o][r].mean;
            }
        out.batch_mean.push_back(std::move(bm));
        out.batch_size.push_back(res.size);
        out.max_trace_drift = std::max(out.max_trace_drift, res.max_trace_drift);
        out.max_purity_drift = std::max(out.max_purity_drift, res.max_purity_drift);
        if (res.density_sum) {
            if (!out.final_density) out.final_density = ComplexMatrix(plan.dim);
            *out.final_density += *res.density_sum;
        }
    }
    if (out.final_density) *out.final_density *= Complex{1.0 / static_cast<double>(config.n_trajectories), 0.0};

    const double n = static_cast<double>(config.n_trajectories);
    out.mean.assign(n_obs, std::vector<double>(plan.n_records));
    out.std_error.assign(n_obs, std::vector<double>(plan.n_records));
    for (std::size_t o = 0; o < n_obs; ++o)
        for (std::size_t r = 0; r < plan.n_records; ++r) {
            out.mean[o][r] = total[o][r].mean;
            const double var = total[o][r].m2 / (n - 1.0);
            out.std_error[o][r] = std::sqrt(std::max(var, 0.0) / n);
        }
    return out;
}

void write_timeseries_csv(std::ostream& out, const EnsembleObservables& obs) {
    out << "t,obs_label,mean,stderr\n";
    for (std::size_t r = 0; r < obs.t_grid.size(); ++r)
        for (std::size_t o = 0; o < obs.labels.size(); ++o) {
            out << fmt_double(obs.t_grid[r]) << ',' << obs.labels[o] << ',' << fmt_double(obs.mean[o][r]) << ','
                << fmt_double(obs.std_error[o][r]) << '\n';
        }
}

}  // namespace esmem
