#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace winfree {

enum class ErrorCode {
  NotUnitNorm,
  NotSkew,
  DegeneratePoint,
  ZeroVector,
  DomainError,
  InvalidProfile,
  EmptyConfiguration,
  LengthMismatch,
  BlowUp,
  HypothesisViolated,
  UnsupportedDim,
  DegenerateProfile,
  PreconditionUnmet,
  BoundInapplicable,
  TrajectoryTooShort,
  NonPositiveValues,
  DegenerateQuadruple,
  VanishingInnerProduct,
  OutOfRange,
  UnsupportedAxis,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI, the verification driver) can map it without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotUnitNorm: return "NotUnitNorm";
    case ErrorCode::NotSkew: return "NotSkew";
    case ErrorCode::DegeneratePoint: return "DegeneratePoint";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::EmptyConfiguration: return "EmptyConfiguration";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::UnsupportedDim: return "UnsupportedDim";
    case ErrorCode::DegenerateProfile: return "DegenerateProfile";
    case ErrorCode::PreconditionUnmet: return "PreconditionUnmet";
    case ErrorCode::BoundInapplicable: return "BoundInapplicable";
    case ErrorCode::TrajectoryTooShort: return "TrajectoryTooShort";
    case ErrorCode::NonPositiveValues: return "NonPositiveValues";
    case ErrorCode::DegenerateQuadruple: return "DegenerateQuadruple";
    case ErrorCode::VanishingInnerProduct: return "VanishingInnerProduct";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::UnsupportedAxis: return "UnsupportedAxis";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace winfree
