#include "esmem/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "esmem/error.hpp"

namespace esmem::cli {
namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "n_qubits",        "omega0",           "j_coupling",       "gamma",
        "frame_mode",      "noise_amplitude_sq", "tau0",           "noise_correlation",
        "dt",              "t_total",          "n_trajectories",   "master_seed",
        "initial_state",   "observables",      "rotating_frame",   "record_every",
        "noise_oversample", "n_batches",       "fit_observable",   "fit_quadrature",
        "fit_t_min",       "fit_t_max",        "out_dir",          "threads",
        "sweep_horizon_t2", "sweep_target_records", "spectrum_n_steps", "spectrum_dt",
        "spectrum_axis",   "spectrum_qubit",   "spectrum_omega_max", "spectrum_n_omega",
    };
    return keys;
}

[[noreturn]] void field_error(const std::string& key, const std::string& what) {
    throw ConfigError("field '" + key + "': " + what);
}

double get_number(const json& doc, const std::string& key, double fallback) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if (!v.is_number()) field_error(key, "expected a number");
    return v.get<double>();
}

template <typename Int>
Int get_unsigned(const json& doc, const std::string& key, Int fallback) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
        field_error(key, "expected a non-negative integer");
    }
    return static_cast<Int>(v.get<std::uint64_t>());
}

std::string get_string(const json& doc, const std::string& key, const std::string& fallback) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if (!v.is_string()) field_error(key, "expected a string");
    return v.get<std::string>();
}

bool get_bool(const json& doc, const std::string& key, bool fallback) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if (!v.is_boolean()) field_error(key, "expected true or false");
    return v.get<bool>();
}

std::optional<double> get_optional_number(const json& doc, const std::string& key) {
    if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
    return get_number(doc, key, 0.0);
}

std::string frame_mode_name(FrameMode mode) {
    return mode == FrameMode::LabFrame ? "lab_frame" : "effective_zero_splitting";
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min(offset, text.size()); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

}  // namespace

EnsembleFitRequest RunConfig::fit_request() const {
    EnsembleFitRequest req;
    req.observable = fit_observable;
    if (fit_quadrature) req.quadrature = *fit_quadrature;
    const bool precessing = !evolution.rotating_frame && system.effective_omega0() != 0.0;
    req.carrier_frequency = precessing ? system.effective_omega0() : 0.0;
    req.tau0 = system.noise.tau0;
    if (fit_t_min || fit_t_max) {
        req.window = FitWindow{fit_t_min.value_or(kDefaultWindowStartInTau0 * system.noise.tau0),
                               fit_t_max.value_or(evolution.t_total)};
    }
    return req;
}

RunConfig parse_run_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (!known_keys().count(key)) field_error(key, "unknown key");
    }

    RunConfig c;
    auto& s = c.system;
    s.n_qubits = static_cast<int>(get_unsigned<unsigned>(doc, "n_qubits", 2));
    if (s.n_qubits < 1 || s.n_qubits > 3) field_error("n_qubits", "must be 1, 2 or 3");
    s.omega0 = get_number(doc, "omega0", 0.0);
    s.j_coupling = get_number(doc, "j_coupling", 1.0);
    s.gamma = get_number(doc, "gamma", 1.0);
    const std::string mode = get_string(doc, "frame_mode", "effective_zero_splitting");
    if (mode == "effective_zero_splitting") {
        s.frame_mode = FrameMode::EffectiveZeroSplitting;
    } else if (mode == "lab_frame") {
        s.frame_mode = FrameMode::LabFrame;
    } else {
        field_error("frame_mode", "expected effective_zero_splitting or lab_frame");
    }
    if (doc.contains("noise_amplitude_sq")) {
        const auto& a = doc.at("noise_amplitude_sq");
        if (!a.is_array() || a.size() != 3) field_error("noise_amplitude_sq", "expected [x, y, z]");
        for (std::size_t i = 0; i < 3; ++i) {
            if (!a[i].is_number()) field_error("noise_amplitude_sq", "expected numbers");
            s.noise.amplitude_sq[i] = a[i].get<double>();
        }
    }
    s.noise.tau0 = get_number(doc, "tau0", 1.0);
    const std::string corr = get_string(doc, "noise_correlation", "independent");
    if (corr == "independent") {
        s.noise.correlation = QubitCorrelation::Independent;
    } else if (corr == "identical") {
        s.noise.correlation = QubitCorrelation::Identical;
    } else {
        field_error("noise_correlation", "expected independent or identical");
    }

    auto& e = c.evolution;
    e.dt = get_number(doc, "dt", 0.01);
    e.t_total = get_number(doc, "t_total", 1.0);
    e.n_trajectories = get_unsigned<std::size_t>(doc, "n_trajectories", 100);
    e.master_seed = get_unsigned<std::uint64_t>(doc, "master_seed", 1);
    e.rotating_frame = get_bool(doc, "rotating_frame", true);
    e.record_every = get_unsigned<std::size_t>(doc, "record_every", 1);
    e.noise_oversample = get_unsigned<std::size_t>(doc, "noise_oversample", 2);
    e.n_batches = get_unsigned<std::size_t>(doc, "n_batches", 16);

    c.initial_state = get_string(doc, "initial_state", std::string(static_cast<std::size_t>(s.n_qubits), '+'));
    if (c.initial_state.size() != static_cast<std::size_t>(s.n_qubits)) {
        field_error("initial_state", "needs one label per qubit");
    }
    try {
        e.initial_state = product_state_density(c.initial_state);
    } catch (const Error& err) {
        field_error("initial_state", err.what());
    }

    if (doc.contains("observables")) {
        const auto& list = doc.at("observables");
        if (!list.is_array()) field_error("observables", "expected a list of labels such as \"I1x\"");
        for (const auto& item : list) {
            if (!item.is_string()) field_error("observables", "expected strings");
            try {
                e.observables.push_back(Observable::parse(item.get<std::string>()));
            } catch (const Error& err) {
                field_error("observables", err.what());
            }
        }
    } else {
        e.observables = {Observable{0, Axis::X}, Observable{0, Axis::Y}, Observable{0, Axis::Z}};
    }

    c.fit_observable = get_string(doc, "fit_observable", "I1x");
    if (doc.contains("fit_quadrature") && !doc.at("fit_quadrature").is_null()) {
        c.fit_quadrature = get_string(doc, "fit_quadrature", "");
    }
    c.fit_t_min = get_optional_number(doc, "fit_t_min");
    c.fit_t_max = get_optional_number(doc, "fit_t_max");
    c.out_dir = get_string(doc, "out_dir", "out");
    c.threads = get_unsigned<unsigned>(doc, "threads", 0);

    c.sweep_horizon_t2 = get_number(doc, "sweep_horizon_t2", 1.5);
    if (!(c.sweep_horizon_t2 > 0.0)) field_error("sweep_horizon_t2", "must be > 0");
    c.sweep_target_records = get_unsigned<std::size_t>(doc, "sweep_target_records", 400);
    if (c.sweep_target_records < 20) field_error("sweep_target_records", "must be >= 20");

    c.spectrum_n_steps = get_unsigned<std::size_t>(doc, "spectrum_n_steps", 1'000'000);
    c.spectrum_dt = get_optional_number(doc, "spectrum_dt");
    if (c.spectrum_dt && !(*c.spectrum_dt > 0.0)) field_error("spectrum_dt", "must be > 0");
    try {
        c.spectrum_axis = parse_axis(get_string(doc, "spectrum_axis", "z"));
    } catch (const Error&) {
        field_error("spectrum_axis", "expected x, y or z");
    }
    c.spectrum_qubit = static_cast<int>(get_unsigned<unsigned>(doc, "spectrum_qubit", 1));
    if (c.spectrum_qubit < 1 || c.spectrum_qubit > s.n_qubits) field_error("spectrum_qubit", "names a missing qubit");
    c.spectrum_omega_max = get_number(doc, "spectrum_omega_max", 5.0);
    c.spectrum_n_omega = get_unsigned<std::size_t>(doc, "spectrum_n_omega", 51);
    if (c.spectrum_n_omega < 2) field_error("spectrum_n_omega", "must be >= 2");

    for (const auto& o : e.observables) {
        if (o.qubit >= s.n_qubits) field_error("observables", o.label() + " names a missing qubit");
    }
    try {
        s.validate();
    } catch (const Error& err) {
        throw ConfigError(err.what());
    }
    return c;
}

RunConfig parse_run_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        std::ostringstream msg;
        msg << "line " << line_of_offset(text, err.byte) << ": " << err.what();
        throw ConfigError(msg.str());
    }
    if (doc.is_object() && doc.contains("config") && doc.contains("esmem_version")) return parse_run_config(doc["config"]);
    return parse_run_config(doc);
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read configuration file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_run_config_text(buf.str());
}

json to_json(const RunConfig& c) {
    const auto& s = c.system;
    const auto& e = c.evolution;
    json observables = json::array();
    for (const auto& o : e.observables) observables.push_back(o.label());
    json doc{
        {"n_qubits", s.n_qubits},
        {"omega0", s.omega0},
        {"j_coupling", s.j_coupling},
        {"gamma", s.gamma},
        {"frame_mode", frame_mode_name(s.frame_mode)},
        {"noise_amplitude_sq", s.noise.amplitude_sq},
        {"tau0", s.noise.tau0},
        {"noise_correlation", s.noise.correlation == QubitCorrelation::Identical ? "identical" : "independent"},
        {"dt", e.dt},
        {"t_total", e.t_total},
        {"n_trajectories", e.n_trajectories},
        {"master_seed", e.master_seed},
        {"initial_state", c.initial_state},
        {"observables", observables},
        {"rotating_frame", e.rotating_frame},
        {"record_every", e.record_every},
        {"noise_oversample", e.noise_oversample},
        {"n_batches", e.n_batches},
        {"fit_observable", c.fit_observable},
        {"fit_quadrature", c.fit_quadrature ? json(*c.fit_quadrature) : json(nullptr)},
        {"fit_t_min", c.fit_t_min ? json(*c.fit_t_min) : json(nullptr)},
        {"fit_t_max", c.fit_t_max ? json(*c.fit_t_max) : json(nullptr)},
        {"out_dir", c.out_dir},
        {"threads", c.threads},
        {"sweep_horizon_t2", c.sweep_horizon_t2},
        {"sweep_target_records", c.sweep_target_records},
        {"spectrum_n_steps", c.spectrum_n_steps},
        {"spectrum_dt", c.spectrum_step()},
        {"spectrum_axis", std::string(1, axis_name(c.spectrum_axis))},
        {"spectrum_qubit", c.spectrum_qubit},
        {"spectrum_omega_max", c.spectrum_omega_max},
        {"spectrum_n_omega", c.spectrum_n_omega},
    };
    return doc;
}

}  // namespace esmem::cli
