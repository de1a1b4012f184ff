#pragma once

#include <stdexcept>
#include <string>

namespace degmap {

enum class ErrorKind {
  InvalidArgument,
  DegenerateCoverage,
  IllPosedSystem,
  SolverFailure,
  NotFound,
  InvalidTrajectory,
  Infeasible,
  Unbounded,
  ParseError,
  IoError,
};

constexpr const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::DegenerateCoverage: return "degenerate_coverage";
    case ErrorKind::IllPosedSystem: return "ill_posed_system";
    case ErrorKind::SolverFailure: return "solver_failure";
    case ErrorKind::NotFound: return "not_found";
    case ErrorKind::InvalidTrajectory: return "invalid_trajectory";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::Unbounded: return "unbounded";
    case ErrorKind::ParseError: return "parse_error";
    case ErrorKind::IoError: return "io_error";
  }
  return "unknown";
}

/// Domain error carrying a machine-readable kind next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  const char* kind_name() const noexcept { return error_kind_name(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace degmap
