#include "instanton/error.hpp"

namespace instanton {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::SlowDecay: return "SlowDecay";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::BoundaryTooClose: return "BoundaryTooClose";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::WrongFamily: return "WrongFamily";
    case ErrorCode::AxisPoint: return "AxisPoint";
    case ErrorCode::ChartAxis: return "ChartAxis";
    case ErrorCode::SmallRadius: return "SmallRadius";
    case ErrorCode::SingularAxis: return "SingularAxis";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what, std::optional<double> value)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), value_(value) {}

}  // namespace instanton
