#include "pathint/error.hpp"

namespace pathint {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonMonotoneTimes: return "NonMonotoneTimes";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyPath: return "EmptyPath";
    case Errc::InvalidJumpMark: return "InvalidJumpMark";
    case Errc::TimeBeforeOrigin: return "TimeBeforeOrigin";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::NonPositiveC: return "NonPositiveC";
    case Errc::NegativeC: return "NegativeC";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::MethodMismatch: return "MethodMismatch";
    case Errc::CarrierViolation: return "CarrierViolation";
    case Errc::PhiOutOfRange: return "PhiOutOfRange";
    case Errc::PathTooLong: return "PathTooLong";
    case Errc::NonPositiveThreshold: return "NonPositiveThreshold";
    case Errc::InconsistentMarks: return "InconsistentMarks";
    case Errc::BoundViolation: return "BoundViolation";
    case Errc::IdentityViolation: return "IdentityViolation";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_violation(Errc code) noexcept {
  switch (code) {
    case Errc::CarrierViolation:
    case Errc::PhiOutOfRange:
    case Errc::BoundViolation:
    case Errc::IdentityViolation:
      return true;
    default:
      return false;
  }
}

Error::Error(Errc code, const std::string& message,
             std::optional<std::size_t> index)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      index_(index) {}

}  // namespace pathint
