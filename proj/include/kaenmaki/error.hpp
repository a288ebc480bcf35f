#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kaenmaki {

/// Every failure the library reports carries one of these codes. The CLI
/// prints the code name verbatim, so the names are part of the interface.
enum class ErrorCode {
  MalformedConfig,
  NonContracting,
  SquareEscape,
  NoDiagonal,
  NoAntiDiagonal,
  BadShape,
  NotInImage,
  SOutOfRange,
  ConvergenceFailure,
  InternalMismatch,
  TooLarge,
  BadMapKinds,
  NoCertificate,
  MissingValue,
  TooFewHits,
  Undecided,
  IoFailure,
};

inline constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedConfig: return "MalformedConfig";
    case ErrorCode::NonContracting: return "NonContracting";
    case ErrorCode::SquareEscape: return "SquareEscape";
    case ErrorCode::NoDiagonal: return "NoDiagonal";
    case ErrorCode::NoAntiDiagonal: return "NoAntiDiagonal";
    case ErrorCode::BadShape: return "BadShape";
    case ErrorCode::NotInImage: return "NotInImage";
    case ErrorCode::SOutOfRange: return "SOutOfRange";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::InternalMismatch: return "InternalMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::BadMapKinds: return "BadMapKinds";
    case ErrorCode::NoCertificate: return "NoCertificate";
    case ErrorCode::MissingValue: return "MissingValue";
    case ErrorCode::TooFewHits: return "TooFewHits";
    case ErrorCode::Undecided: return "Undecided";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace kaenmaki
