#pragma once

#include <stdexcept>
#include <string>

namespace apollo {

// Failure taxonomy shared by the geometry core, scenario builders and the CLI.
enum class ErrorCode {
  DimensionMismatch,
  IsotropicAxis,
  DegeneratePencil,
  DependentGenerators,
  RankDeficient,
  DegenerateConfiguration,
  AtInfinity,
  NotGeneric,
  SecondLevelDegenerate,
  CenterAtInfinity,
  CoincidentCenters,
  EmptyTangentSet,
  NotACycle,
  DegenerateVector,
  InvalidParams,
  GenerationExhausted,
  ParseError,
  ValidationError,
  UnsupportedDimension,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::IsotropicAxis: return "ISOTROPIC_AXIS";
    case ErrorCode::DegeneratePencil: return "DEGENERATE_PENCIL";
    case ErrorCode::DependentGenerators: return "DEPENDENT_GENERATORS";
    case ErrorCode::RankDeficient: return "RANK_DEFICIENT";
    case ErrorCode::DegenerateConfiguration: return "DEGENERATE_CONFIGURATION";
    case ErrorCode::AtInfinity: return "AT_INFINITY";
    case ErrorCode::NotGeneric: return "NOT_GENERIC";
    case ErrorCode::SecondLevelDegenerate: return "SECOND_LEVEL_DEGENERATE";
    case ErrorCode::CenterAtInfinity: return "CENTER_AT_INFINITY";
    case ErrorCode::CoincidentCenters: return "COINCIDENT_CENTERS";
    case ErrorCode::EmptyTangentSet: return "EMPTY_TANGENT_SET";
    case ErrorCode::NotACycle: return "NOT_A_CYCLE";
    case ErrorCode::DegenerateVector: return "DEGENERATE_VECTOR";
    case ErrorCode::InvalidParams: return "INVALID_PARAMS";
    case ErrorCode::GenerationExhausted: return "GENERATION_EXHAUSTED";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::ValidationError: return "VALIDATION_ERROR";
    case ErrorCode::UnsupportedDimension: return "UNSUPPORTED_DIMENSION";
  }
  return "UNKNOWN";
}

class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorCode code, const std::string& message, int subset_index = -1)
      : std::runtime_error(message), code_(code), subset_index_(subset_index) {}

  ErrorCode code() const { return code_; }
  // Offending (n+1)-subset, identified by the omitted cycle index; -1 when not applicable.
  int subset_index() const { return subset_index_; }

 private:
  ErrorCode code_;
  int subset_index_;
};

}  // namespace apollo
