#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bu {

enum class ErrorCode {
  // raster I/O
  NotP5,
  NotPf,
  BadHeader,
  NotBinary,
  OutOfRange,
  // argument and state validation
  InvalidGrid,
  ConstraintViolation,
  ShapeMismatch,
  EmptyMask,
  DegenerateMask,
  EmptyList,
  ConfigInvalid,
  EmptyDataset,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bu
