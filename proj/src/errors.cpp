#include "pgreen/errors.hpp"

namespace pgreen {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::NonSymmetricMetric: return "NonSymmetricMetric";
    case ErrorCode::EmptyCoefficients: return "EmptyCoefficients";
    case ErrorCode::NotElliptic: return "NotElliptic";
    case ErrorCode::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::LeadingTermNearZero: return "LeadingTermNearZero";
    case ErrorCode::A1Violated: return "A1Violated";
    case ErrorCode::A2Violated: return "A2Violated";
    case ErrorCode::A3Violated: return "A3Violated";
    case ErrorCode::A4Violated: return "A4Violated";
    case ErrorCode::NotIsolatedMinimum: return "NotIsolatedMinimum";
    case ErrorCode::DegenerateBand: return "DegenerateBand";
    case ErrorCode::EigenSolverFailure: return "EigenSolverFailure";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::TailTruncationDominates: return "TailTruncationDominates";
    case ErrorCode::BranchLost: return "BranchLost";
  }
  return "UnknownError";
}

ErrorCategory error_category(ErrorCode c) {
  switch (c) {
    case ErrorCode::BadConfig:
    case ErrorCode::NonSymmetricMetric:
    case ErrorCode::EmptyCoefficients:
    case ErrorCode::NotElliptic:
    case ErrorCode::CutoffTooSmall:
    case ErrorCode::DimensionTooSmall:
    case ErrorCode::SingularPoint:
    case ErrorCode::LeadingTermNearZero:
      return ErrorCategory::Config;
    case ErrorCode::A1Violated:
    case ErrorCode::A2Violated:
    case ErrorCode::A3Violated:
    case ErrorCode::A4Violated:
    case ErrorCode::NotIsolatedMinimum:
    case ErrorCode::DegenerateBand:
      return ErrorCategory::Assumption;
    default:
      return ErrorCategory::Numerical;
  }
}

}  // namespace pgreen
