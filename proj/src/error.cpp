#include "devkit/error.hpp"

namespace devkit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::EndoDomainMismatch: return "EndoDomainMismatch";
    case ErrorKind::MorphismDomainMismatch: return "MorphismDomainMismatch";
    case ErrorKind::MissingEquivarianceTag: return "MissingEquivarianceTag";
    case ErrorKind::RingMismatch: return "RingMismatch";
    case ErrorKind::LevelExceedsPrecision: return "LevelExceedsPrecision";
    case ErrorKind::UnknownGenerator: return "UnknownGenerator";
    case ErrorKind::NotEtale: return "NotEtale";
    case ErrorKind::SizeGuard: return "SizeGuard";
    case ErrorKind::FixedSubringUnsupported: return "FixedSubringUnsupported";
    case ErrorKind::ResidualActionEscapes: return "ResidualActionEscapes";
    case ErrorKind::LiftObstruction: return "LiftObstruction";
    case ErrorKind::ExtensionBudgetExceeded: return "ExtensionBudgetExceeded";
    case ErrorKind::ActionMismatch: return "ActionMismatch";
    case ErrorKind::NotSubtleFinite: return "NotSubtleFinite";
    case ErrorKind::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, nlohmann::json detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      detail_(std::move(detail)) {}

nlohmann::json Error::to_json() const {
  nlohmann::json j;
  j["error"] = std::string(to_string(kind_));
  j["message"] = what();
  if (!detail_.is_null()) j["detail"] = detail_;
  return j;
}

}  // namespace devkit
