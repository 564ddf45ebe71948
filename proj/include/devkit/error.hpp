#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace devkit {

enum class ErrorKind {
  InvalidArgument,
  NotAUnit,
  PrecisionExhausted,
  EndoDomainMismatch,
  MorphismDomainMismatch,
  MissingEquivarianceTag,
  RingMismatch,
  LevelExceedsPrecision,
  UnknownGenerator,
  NotEtale,
  SizeGuard,
  FixedSubringUnsupported,
  ResidualActionEscapes,
  LiftObstruction,
  ExtensionBudgetExceeded,
  ActionMismatch,
  NotSubtleFinite,
  SchemaError,
};

std::string_view to_string(ErrorKind kind);

/// Every library failure is reported through this type; `detail` carries the
/// structured witness (offending element, level, residual vector, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, nlohmann::json detail = {});

  ErrorKind kind() const noexcept { return kind_; }
  const nlohmann::json& detail() const noexcept { return detail_; }
  nlohmann::json to_json() const;

 private:
  ErrorKind kind_;
  nlohmann::json detail_;
};

}  // namespace devkit
