#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace spectral {

/// Every failure the library reports. The CLI maps each code to a distinct
/// exit status, so the numeric values are part of the public interface.
enum class Errc : int {
  InvalidDimensions = 10,
  NonFiniteEntry = 11,
  NotSquare = 12,
  NotSymmetric = 13,
  KOutOfRange = 14,
  NoConvergence = 15,
  NonPositiveWeight = 16,
  WrongGraphKind = 17,
  ZeroDegreeVertex = 18,
  EmptyCluster = 19,
  ZeroClusterWeight = 20,
  NegativeEntry = 21,
  DimensionMismatch = 22,
  NegativeAffinity = 23,
  InvalidArgument = 24,
  DegenerateEmbedding = 25,
  TooLarge = 26,
  ParseError = 27,
  SymmetryViolation = 28,
  DuplicateCoordinate = 29,
  UnsupportedObjective = 30,
  IoError = 31,
};

constexpr std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidDimensions: return "InvalidDimensions";
    case Errc::NonFiniteEntry: return "NonFiniteEntry";
    case Errc::NotSquare: return "NotSquare";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::KOutOfRange: return "KOutOfRange";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::NonPositiveWeight: return "NonPositiveWeight";
    case Errc::WrongGraphKind: return "WrongGraphKind";
    case Errc::ZeroDegreeVertex: return "ZeroDegreeVertex";
    case Errc::EmptyCluster: return "EmptyCluster";
    case Errc::ZeroClusterWeight: return "ZeroClusterWeight";
    case Errc::NegativeEntry: return "NegativeEntry";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NegativeAffinity: return "NegativeAffinity";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DegenerateEmbedding: return "DegenerateEmbedding";
    case Errc::TooLarge: return "TooLarge";
    case Errc::ParseError: return "ParseError";
    case Errc::SymmetryViolation: return "SymmetryViolation";
    case Errc::DuplicateCoordinate: return "DuplicateCoordinate";
    case Errc::UnsupportedObjective: return "UnsupportedObjective";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Parse failures carry the 1-based line number of the offending input line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(Errc::ParseError, "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace spectral
