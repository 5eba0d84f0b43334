#pragma once

#include <stdexcept>
#include <string>

namespace radialwave {

enum class ErrorKind {
  InvalidParams,
  GridMismatch,
  NumericalFailure,
  IllConditioned,
  EmptyBlock,
  RegionError,
  SourceError,
  CausalityError,
  PreconditionError,
  ShootFailure,
  RangeError,
  InvalidExponents,
  ConfigError,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::EmptyBlock: return "EmptyBlock";
    case ErrorKind::RegionError: return "RegionError";
    case ErrorKind::SourceError: return "SourceError";
    case ErrorKind::CausalityError: return "CausalityError";
    case ErrorKind::PreconditionError: return "PreconditionError";
    case ErrorKind::ShootFailure: return "ShootFailure";
    case ErrorKind::RangeError: return "RangeError";
    case ErrorKind::InvalidExponents: return "InvalidExponents";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it to an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) raise(kind, what);
}

}  // namespace radialwave
