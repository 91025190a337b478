#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aaegd {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  SingularSystem,
  NotSymmetric,
  BadLabel,
  ParseError,
  RaggedRows,
  NonFiniteGradient,
  EnergyDomainViolation,
  Diverged,
  ZeroGradient,
  BoundViolated,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::BadLabel: return "BadLabel";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::RaggedRows: return "RaggedRows";
    case ErrorKind::NonFiniteGradient: return "NonFiniteGradient";
    case ErrorKind::EnergyDomainViolation: return "EnergyDomainViolation";
    case ErrorKind::Diverged: return "Diverged";
    case ErrorKind::ZeroGradient: return "ZeroGradient";
    case ErrorKind::BoundViolated: return "BoundViolated";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace aaegd
