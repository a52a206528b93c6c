#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace corrnet {

enum class ErrorCode {
  MalformedCsv,
  NonPositivePrice,
  DuplicateDate,
  DuplicateIndexId,
  EmptyPanelAfterAlignment,
  LeadingGap,
  EmptySlice,
  TooFewDates,
  ZeroVariance,
  AlreadyNormalized,
  NormalizedInput,
  EmptyInput,
  SeriesTooShort,
  TooFewObservations,
  NotNormalized,
  TooFewIndices,
  DisconnectedGraph,
  TooFewNodes,
  NoEdges,
  NonPositiveWeight,
  UnknownOverrideId,
  OutOfRangeCoordinate,
  MissingCoordinate,
  MissingZone,
  TooFewPoints,
  NonPositiveValue,
  DegenerateFit,
  EmptySample,
  InfeasibleSpec,
  InvalidArgument,
  InvalidConfig,
  Io,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::NonPositivePrice: return "NonPositivePrice";
    case ErrorCode::DuplicateDate: return "DuplicateDate";
    case ErrorCode::DuplicateIndexId: return "DuplicateIndexId";
    case ErrorCode::EmptyPanelAfterAlignment: return "EmptyPanelAfterAlignment";
    case ErrorCode::LeadingGap: return "LeadingGap";
    case ErrorCode::EmptySlice: return "EmptySlice";
    case ErrorCode::TooFewDates: return "TooFewDates";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::AlreadyNormalized: return "AlreadyNormalized";
    case ErrorCode::NormalizedInput: return "NormalizedInput";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::TooFewObservations: return "TooFewObservations";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::TooFewIndices: return "TooFewIndices";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::TooFewNodes: return "TooFewNodes";
    case ErrorCode::NoEdges: return "NoEdges";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::UnknownOverrideId: return "UnknownOverrideId";
    case ErrorCode::OutOfRangeCoordinate: return "OutOfRangeCoordinate";
    case ErrorCode::MissingCoordinate: return "MissingCoordinate";
    case ErrorCode::MissingZone: return "MissingZone";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::InfeasibleSpec: return "InfeasibleSpec";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Every contract violation in the library surfaces as this type; `code()`
/// identifies the violated contract, `what()` carries the context.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }

  /// Same error with `context` prepended to the message.
  Error with_context(const std::string& context) const { return Error(code_, context + ": " + message_); }

 private:
  ErrorCode code_;
  std::string message_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace corrnet
