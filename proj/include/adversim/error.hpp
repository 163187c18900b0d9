#pragma once

#include <stdexcept>
#include <string>

namespace adversim {

enum class ErrorCode {
  kSchemaViolation,
  kRouteInfeasible,
  kProximityUnmet,
  kInitializationCritical,
  kOutOfExtent,
  kNoAdversaries,
  kTapeMissing,
  kNotDifferentiableEgo,
  kRouteExhausted,
  kEmptyDataset,
  kShapeMismatch,
  kMethodIncompatible,
  kDegenerateGeometry,
  kInsufficientRoutes,
  kTooFewScenarios,
  kIoFailure,
  kInvalidArgument,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace adversim
