#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pathint {

enum class Errc {
  NonMonotoneTimes,
  LengthMismatch,
  EmptyPath,
  InvalidJumpMark,
  TimeBeforeOrigin,
  InvalidSpec,
  NonPositiveC,
  NegativeC,
  GridMismatch,
  MethodMismatch,
  CarrierViolation,
  PhiOutOfRange,
  PathTooLong,
  NonPositiveThreshold,
  InconsistentMarks,
  BoundViolation,
  IdentityViolation,
  GridTooCoarse,
  InvalidConfig,
  ParseError,
  IoError,
};

std::string_view to_string(Errc code) noexcept;

// True for errors that signal a broken invariant rather than bad input.
bool is_violation(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message,
        std::optional<std::size_t> index = std::nullopt);

  Errc code() const noexcept { return code_; }
  // Offending grid index, when the error is attributable to one.
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  Errc code_;
  std::optional<std::size_t> index_;
};

}  // namespace pathint
