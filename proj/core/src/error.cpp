#include "bu/error.hpp"

namespace bu {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotP5: return "NotP5";
    case ErrorCode::NotPf: return "NotPf";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::NotBinary: return "NotBinary";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::DegenerateMask: return "DegenerateMask";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace bu
