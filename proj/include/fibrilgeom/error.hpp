#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fibrilgeom {

enum class ErrorCode {
  MalformedRecord,
  EmptyStructure,
  ChainNotFound,
  MissingBackboneAtom,
  DegenerateCurve,
  ZeroQuaternion,
  CoincidentPoints,
  NonPositiveRealBranch,
  DegenerateQuadruple,
  BranchFailure,
  IndexOutOfRange,
  CurveTooShort,
  LengthMismatch,
  DegenerateConfiguration,
  DegenerateWindow,
  SingularSystem,
  LabelPatternViolation,
  LayerListTooShort,
  InsufficientData,
  ZeroVariance,
  DuplicatePoints,
  EssentialMismatch,
  InvalidArgument,
  Io,
};

/// Coarse grouping used for process exit codes.
enum class ErrorCategory { Input, NumericDegeneracy, Internal };

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::EmptyStructure: return "EmptyStructure";
    case ErrorCode::ChainNotFound: return "ChainNotFound";
    case ErrorCode::MissingBackboneAtom: return "MissingBackboneAtom";
    case ErrorCode::DegenerateCurve: return "DegenerateCurve";
    case ErrorCode::ZeroQuaternion: return "ZeroQuaternion";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::NonPositiveRealBranch: return "NonPositiveRealBranch";
    case ErrorCode::DegenerateQuadruple: return "DegenerateQuadruple";
    case ErrorCode::BranchFailure: return "BranchFailure";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::CurveTooShort: return "CurveTooShort";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::DegenerateWindow: return "DegenerateWindow";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::LabelPatternViolation: return "LabelPatternViolation";
    case ErrorCode::LayerListTooShort: return "LayerListTooShort";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::DuplicatePoints: return "DuplicatePoints";
    case ErrorCode::EssentialMismatch: return "EssentialMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

constexpr ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroQuaternion:
    case ErrorCode::CoincidentPoints:
    case ErrorCode::NonPositiveRealBranch:
    case ErrorCode::DegenerateQuadruple:
    case ErrorCode::BranchFailure:
    case ErrorCode::DegenerateConfiguration:
    case ErrorCode::DegenerateWindow:
    case ErrorCode::SingularSystem:
    case ErrorCode::ZeroVariance:
    case ErrorCode::DegenerateCurve:
      return ErrorCategory::NumericDegeneracy;
    default:
      return ErrorCategory::Input;
  }
}

constexpr std::string_view to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Input: return "input";
    case ErrorCategory::NumericDegeneracy: return "numeric";
    case ErrorCategory::Internal: return "internal";
  }
  return "internal";
}

/// Every failure raised by the library. The code is stable and machine-readable;
/// the message carries the human detail (line numbers, residue ids, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
};

}  // namespace fibrilgeom
