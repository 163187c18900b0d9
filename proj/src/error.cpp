#include "adversim/error.hpp"

namespace adversim {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kRouteInfeasible: return "RouteInfeasible";
    case ErrorCode::kProximityUnmet: return "ProximityUnmet";
    case ErrorCode::kInitializationCritical: return "InitializationCritical";
    case ErrorCode::kOutOfExtent: return "OutOfExtent";
    case ErrorCode::kNoAdversaries: return "NoAdversaries";
    case ErrorCode::kTapeMissing: return "TapeMissing";
    case ErrorCode::kNotDifferentiableEgo: return "NotDifferentiableEgo";
    case ErrorCode::kRouteExhausted: return "RouteExhausted";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kMethodIncompatible: return "MethodIncompatible";
    case ErrorCode::kDegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::kInsufficientRoutes: return "InsufficientRoutes";
    case ErrorCode::kTooFewScenarios: return "TooFewScenarios";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace adversim
