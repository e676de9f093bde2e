#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace instanton {

enum class ErrorCode {
  NoBracket,
  MaxIterExceeded,
  SlowDecay,
  StepUnderflow,
  BoundaryTooClose,
  InsufficientSamples,
  InvalidArgument,
  InvalidParams,
  WrongFamily,
  AxisPoint,
  ChartAxis,
  SmallRadius,
  SingularAxis,
};

const char* to_string(ErrorCode code) noexcept;

// Exception type used throughout the library. Some codes carry the value a
// caller can fall back on, e.g. AxisPoint from solve_eta carries 0 or pi/2.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::optional<double> value = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<double> value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  std::optional<double> value_;
};

}  // namespace instanton
