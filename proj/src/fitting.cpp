#include "esmem/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "esmem/error.hpp"

namespace esmem {
namespace {

struct Line {
    double slope = 0.0;
    double intercept = 0.0;  // at t = 0
    double slope_var = 0.0;
    double goodness = std::numeric_limits<double>::quiet_NaN();
};

Line weighted_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& sigma,
                   bool have_sigma) {
    const std::size_t n = x.size();
    double x0 = 0.0;
    for (double v : x) x0 += v;
    x0 /= static_cast<double>(n);

    double s = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = have_sigma ? 1.0 / (sigma[i] * sigma[i]) : 1.0;
        const double xi = x[i] - x0;
        s += w;
        sx += w * xi;
        sy += w * y[i];
        sxx += w * xi * xi;
        sxy += w * xi * y[i];
    }
    const double delta = s * sxx - sx * sx;
    Line line;
    line.slope = (s * sxy - sx * sy) / delta;
    const double a_centered = (sxx * sy - sx * sxy) / delta;
    line.intercept = a_centered - line.slope * x0;

    double chi2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (a_centered + line.slope * (x[i] - x0));
        chi2 += have_sigma ? r * r / (sigma[i] * sigma[i]) : r * r;
    }
    const double dof = static_cast<double>(n) - 2.0;
    if (have_sigma) {
        line.slope_var = s / delta;
        line.goodness = std::sqrt(chi2 / dof);
    } else {
        line.slope_var = chi2 / dof * s / delta;
    }
    return line;
}

}  // namespace

DecayFit fit_exponential_decay(const TimeSeries& series, FitWindow window) {
    const std::size_t n = series.t.size();
    if (series.value.size() != n || (!series.std_error.empty() && series.std_error.size() != n)) {
        throw Error(ErrorCode::InvalidArgument, "time series columns differ in length");
    }
    if (!(window.t_max > window.t_min)) throw Error(ErrorCode::WindowTooNarrow, "empty fit window");

    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
        if (series.t[i] >= window.t_min && series.t[i] <= window.t_max) idx.push_back(i);
    if (idx.size() < kMinFitPoints) {
        throw Error(ErrorCode::WindowTooNarrow, "fit window holds " + std::to_string(idx.size()) + " points, needs >= " +
                                                    std::to_string(kMinFitPoints));
    }

    double min_positive_err = std::numeric_limits<double>::infinity();
    for (std::size_t i : idx) {
        if (!(series.value[i] > 0.0)) {
            throw Error(ErrorCode::NonPositiveSamples,
                        "non-positive sample " + std::to_string(series.value[i]) + " at t = " + std::to_string(series.t[i]));
        }
        if (!series.std_error.empty() && series.std_error[i] > 0.0) {
            min_positive_err = std::min(min_positive_err, series.std_error[i]);
        }
    }
    const bool have_sigma = std::isfinite(min_positive_err);

    std::vector<double> x, y, sigma;
    for (std::size_t i : idx) {
        x.push_back(series.t[i]);
        y.push_back(std::log(series.value[i]));
        if (have_sigma) sigma.push_back(std::max(series.std_error[i], min_positive_err) / series.value[i]);
    }
    const Line line = weighted_line(x, y, sigma, have_sigma);

    DecayFit fit;
    fit.rate = -line.slope;
    fit.rate_stderr = std::sqrt(std::max(line.slope_var, 0.0));
    fit.amplitude = std::exp(line.intercept);
    fit.window = {x.front(), x.back()};
    fit.goodness = line.goodness;
    fit.goodness_flag = have_sigma && line.goodness > kGoodnessFlag;
    fit.n_points = idx.size();
    return fit;
}

TimeSeries extract_envelope(const TimeSeries& in_phase, const TimeSeries* quadrature, double carrier_frequency) {
    const std::size_t n = in_phase.t.size();
    if (carrier_frequency != 0.0) {
        if (quadrature == nullptr) {
            throw Error(ErrorCode::MissingQuadrature, "nonzero carrier needs both quadrature components");
        }
        double max_gap = 0.0;
        for (std::size_t i = 1; i < n; ++i) max_gap = std::max(max_gap, in_phase.t[i] - in_phase.t[i - 1]);
        const double period = 2.0 * std::numbers::pi / std::abs(carrier_frequency);
        if (period < 8.0 * max_gap) {
            throw Error(ErrorCode::CarrierUnderResolved,
                        "carrier period " + std::to_string(period) + " is sampled by fewer than 8 points");
        }
    }
    TimeSeries out;
    out.t = in_phase.t;
    out.value.resize(n);
    const bool have_err = !in_phase.std_error.empty();
    if (have_err) out.std_error.resize(n);

    if (quadrature == nullptr) {
        for (std::size_t i = 0; i < n; ++i) {
            out.value[i] = std::abs(in_phase.value[i]);
            if (have_err) out.std_error[i] = in_phase.std_error[i];
        }
        return out;
    }
    if (quadrature->t.size() != n || quadrature->value.size() != n) {
        throw Error(ErrorCode::InvalidArgument, "quadrature series length differs");
    }
    const bool have_qerr = quadrature->std_error.size() == n;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = in_phase.value[i];
        const double y = quadrature->value[i];
        const double env = std::hypot(x, y);
        out.value[i] = env;
        if (have_err) {
            const double sx = in_phase.std_error[i];
            const double sy = have_qerr ? quadrature->std_error[i] : 0.0;
            out.std_error[i] = env > 0.0 ? std::hypot(x * sx, y * sy) / env : std::hypot(sx, sy);
        }
    }
    return out;
}

FitWindow default_fit_window(const TimeSeries& series, double tau0) {
    FitWindow w{kDefaultWindowStartInTau0 * tau0, series.t.empty() ? 0.0 : series.t.back()};
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        if (series.t[i] < w.t_min) continue;
        const double err = series.std_error.empty() ? 0.0 : series.std_error[i];
        if (series.value[i] <= 3.0 * err) {
            w.t_max = i > 0 ? series.t[i - 1] : series.t[i];
            break;
        }
    }
    return w;
}

TimeSeries series_of(const EnsembleObservables& obs, std::size_t observable) {
    return {obs.t_grid, obs.mean.at(observable), obs.std_error.at(observable)};
}

DecayFit fit_ensemble_decay(const EnsembleObservables& obs, const EnsembleFitRequest& request) {
    const std::size_t io = obs.observable_index(request.observable);
    const std::optional<std::size_t> iq =
        request.quadrature ? std::optional{obs.observable_index(*request.quadrature)} : std::nullopt;

    auto envelope_of = [&](const TimeSeries& x, const TimeSeries* y) {
        return (y == nullptr && request.carrier_frequency == 0.0) ? x
                                                                  : extract_envelope(x, y, request.carrier_frequency);
    };
    const TimeSeries x = series_of(obs, io);
    const TimeSeries y = iq ? series_of(obs, *iq) : TimeSeries{};
    const TimeSeries env = envelope_of(x, iq ? &y : nullptr);
    const FitWindow window = request.window.value_or(default_fit_window(env, request.tau0));
    DecayFit fit = fit_exponential_decay(env, window);

    const std::size_t n_batches = obs.batch_mean.size();
    if (n_batches < 2) return fit;
    const double n_total = static_cast<double>(obs.n_trajectories);
    std::vector<double> replicates;
    for (std::size_t b = 0; b < n_batches; ++b) {
        const double nb = static_cast<double>(obs.batch_size[b]);
        auto leave_out = [&](std::size_t o) {
            TimeSeries s{obs.t_grid, obs.mean[o], obs.std_error[o]};
            for (std::size_t r = 0; r < s.value.size(); ++r) {
                s.value[r] = (n_total * obs.mean[o][r] - nb * obs.batch_mean[b][o][r]) / (n_total - nb);
            }
            return s;
        };
        const TimeSeries jx = leave_out(io);
        const TimeSeries jy = iq ? leave_out(*iq) : TimeSeries{};
        try {
            replicates.push_back(fit_exponential_decay(envelope_of(jx, iq ? &jy : nullptr), window).rate);
        } catch (const Error&) {
            return fit;  // a replicate left the fit domain; keep the covariance estimate
        }
    }
    double mean = 0.0;
    for (double r : replicates) mean += r;
    mean /= static_cast<double>(replicates.size());
    double ss = 0.0;
    for (double r : replicates) ss += (r - mean) * (r - mean);
    const double bsz = static_cast<double>(replicates.size());
    const double jackknife = std::sqrt((bsz - 1.0) / bsz * ss);
    fit.rate_stderr = std::max(fit.rate_stderr, jackknife);
    fit.n_resamples = replicates.size();
    return fit;
}

}  // namespace esmem
