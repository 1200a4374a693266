#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iwasawa {

enum class ErrorCode {
  PrimeMismatch,
  NotAUnit,
  NotPrime,
  InvalidArgument,
  InvalidCharacter,
  InsufficientPrecision,
  TruncationTooShort,
  DimensionMismatch,
  NotTorsion,
  MuNonzero,
  TrivialCharacter,
  NotFinite,
  LevelMismatch,
  LevelZero,
  SizeLimit,
  DegreeMismatch,
  HypothesisViolated,
  UnknownPrime,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PrimeMismatch: return "PrimeMismatch";
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidCharacter: return "InvalidCharacter";
    case ErrorCode::InsufficientPrecision: return "InsufficientPrecision";
    case ErrorCode::TruncationTooShort: return "TruncationTooShort";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotTorsion: return "NotTorsion";
    case ErrorCode::MuNonzero: return "MuNonzero";
    case ErrorCode::TrivialCharacter: return "TrivialCharacter";
    case ErrorCode::NotFinite: return "NotFinite";
    case ErrorCode::LevelMismatch: return "LevelMismatch";
    case ErrorCode::LevelZero: return "LevelZero";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::UnknownPrime: return "UnknownPrime";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace iwasawa
