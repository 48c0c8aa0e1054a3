#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace esmem {

enum class ErrorCode {
    InvalidArgument,
    NonHermitianInput,
    ZeroAxis,
    InvalidParams,
    TooShort,
    NotApplicable,
    ConfigInvalid,
    NumericalDrift,
    NonPositiveSamples,
    WindowTooNarrow,
    MissingQuadrature,
    CarrierUnderResolved,
    Saturated,
    OutOfCodeSpace,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a code so callers (and the CLI
// exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NonHermitianInput: return "NonHermitianInput";
        case ErrorCode::ZeroAxis: return "ZeroAxis";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::NotApplicable: return "NotApplicable";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::NumericalDrift: return "NumericalDrift";
        case ErrorCode::NonPositiveSamples: return "NonPositiveSamples";
        case ErrorCode::WindowTooNarrow: return "WindowTooNarrow";
        case ErrorCode::MissingQuadrature: return "MissingQuadrature";
        case ErrorCode::CarrierUnderResolved: return "CarrierUnderResolved";
        case ErrorCode::Saturated: return "Saturated";
        case ErrorCode::OutOfCodeSpace: return "OutOfCodeSpace";
    }
    return "Unknown";
}

}  // namespace esmem
