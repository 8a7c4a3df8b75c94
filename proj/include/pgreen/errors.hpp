#pragma once

#include <stdexcept>
#include <string>

namespace pgreen {

enum class ErrorCode {
  // invalid input / configuration
  BadConfig,
  NonSymmetricMetric,
  EmptyCoefficients,
  NotElliptic,
  CutoffTooSmall,
  DimensionTooSmall,
  SingularPoint,
  LeadingTermNearZero,
  // spectral-edge conditions not met
  A1Violated,
  A2Violated,
  A3Violated,
  A4Violated,
  NotIsolatedMinimum,
  DegenerateBand,
  // numerical non-convergence
  EigenSolverFailure,
  QuadratureNotConverged,
  TailTruncationDominates,
  BranchLost,
};

// Process exit codes: config errors 1, edge-condition failures 2, numerics 3.
enum class ErrorCategory : int { Config = 1, Assumption = 2, Numerical = 3 };

const char* error_code_name(ErrorCode c);
ErrorCategory error_category(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + msg),
        code_(code) {}
  ErrorCode code() const { return code_; }
  ErrorCategory category() const { return error_category(code_); }
  const char* code_name() const { return error_code_name(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace pgreen
