#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mde {

enum class ErrorKind {
  kInvalidArgument,
  kEmptyMeasure,
  kZeroMass,
  kGridOverflow,
  kOffGrid,
  kMassMismatch,
  kInvalidVelocityMeasure,
  kNonMonotonePhi,
  kNonInvertiblePhi,
  kInvalidTau,
  kPositivityViolation,
  kBoundViolation,
  kTooManyAtoms,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Numerical and domain errors raised by the library. The kind lets callers
// (the CLI in particular) map failures onto exit codes without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kEmptyMeasure: return "EmptyMeasure";
    case ErrorKind::kZeroMass: return "ZeroMass";
    case ErrorKind::kGridOverflow: return "GridOverflow";
    case ErrorKind::kOffGrid: return "OffGrid";
    case ErrorKind::kMassMismatch: return "MassMismatch";
    case ErrorKind::kInvalidVelocityMeasure: return "InvalidVelocityMeasure";
    case ErrorKind::kNonMonotonePhi: return "NonMonotonePhi";
    case ErrorKind::kNonInvertiblePhi: return "NonInvertiblePhi";
    case ErrorKind::kInvalidTau: return "InvalidTau";
    case ErrorKind::kPositivityViolation: return "PositivityViolation";
    case ErrorKind::kBoundViolation: return "BoundViolation";
    case ErrorKind::kTooManyAtoms: return "TooManyAtoms";
  }
  return "Unknown";
}

}  // namespace mde
