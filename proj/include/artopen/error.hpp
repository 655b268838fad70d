#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace artopen {

enum class ErrorCode {
  InvalidDepth,
  OutOfBounds,
  DegenerateInput,
  Triangle,
  MissingAxis,
  BadCount,
  InsufficientDepth,
  DegeneratePlane,
  DegenerateQuad,
  InsufficientPoints,
  LimitViolation,
  EmptyHeatmap,
  EmptyPlan,
  NoContact,
  Io,
  Parse,
  Schema,
};

std::string_view error_name(ErrorCode code);

/// Exception carrying a machine-readable code. Every module reports
/// precondition failures through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace artopen
