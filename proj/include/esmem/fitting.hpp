#pragma once

// Decay-rate extraction from ensemble time series.

#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "esmem/dynamics.hpp"

namespace esmem {

struct TimeSeries {
    std::vector<double> t;
    std::vector<double> value;
    std::vector<double> std_error;  // may be empty or all zero for exact data
};

struct FitWindow {
    double t_min = 0.0;
    double t_max = std::numeric_limits<double>::infinity();
};

struct DecayFit {
    double rate = 0.0;
    double rate_stderr = 0.0;
    double amplitude = 0.0;
    FitWindow window;
    // sqrt(chi^2 / (n - 2)) against the input stderr; NaN without stderr
    double goodness = std::numeric_limits<double>::quiet_NaN();
    bool goodness_flag = false;  // goodness > kGoodnessFlag
    std::size_t n_points = 0;
    std::size_t n_resamples = 0;  // jackknife replicates behind rate_stderr (0 = fit covariance only)
};

inline constexpr std::size_t kMinFitPoints = 10;
inline constexpr double kGoodnessFlag = 3.0;
inline constexpr double kDefaultWindowStartInTau0 = 3.0;

// Weighted least squares of log(value) against t inside the window.
// Throws WindowTooNarrow (< 10 points) or NonPositiveSamples.
DecayFit fit_exponential_decay(const TimeSeries& series, FitWindow window);

// sqrt(x^2 + y^2) from the quadrature pair, or |x| when the carrier is zero.
// Throws MissingQuadrature for a nonzero carrier without quadrature and
// CarrierUnderResolved below 8 samples per carrier period.
TimeSeries extract_envelope(const TimeSeries& in_phase, const TimeSeries* quadrature, double carrier_frequency);

// (3 tau0, t_end), where t_end stops before the first point whose mean falls
// to within 3 stderr of zero.
FitWindow default_fit_window(const TimeSeries& series, double tau0);

TimeSeries series_of(const EnsembleObservables& obs, std::size_t observable);

struct EnsembleFitRequest {
    std::string_view observable = "I1x";
    std::optional<std::string_view> quadrature;  // e.g. "I1y" when demodulating
    double carrier_frequency = 0.0;
    std::optional<FitWindow> window;  // default_fit_window when empty
    double tau0 = 1.0;
};

// Fits the ensemble mean; rate_stderr is the larger of the fit covariance and a
// leave-one-batch-out jackknife, which accounts for the time correlation of
// Monte Carlo fluctuations along a trajectory.
DecayFit fit_ensemble_decay(const EnsembleObservables& obs, const EnsembleFitRequest& request);

}  // namespace esmem
