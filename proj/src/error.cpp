#include "artopen/error.hpp"

namespace artopen {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDepth: return "InvalidDepth";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::Triangle: return "Triangle";
    case ErrorCode::MissingAxis: return "MissingAxis";
    case ErrorCode::BadCount: return "BadCount";
    case ErrorCode::InsufficientDepth: return "InsufficientDepth";
    case ErrorCode::DegeneratePlane: return "DegeneratePlane";
    case ErrorCode::DegenerateQuad: return "DegenerateQuad";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::LimitViolation: return "LimitViolation";
    case ErrorCode::EmptyHeatmap: return "EmptyHeatmap";
    case ErrorCode::EmptyPlan: return "EmptyPlan";
    case ErrorCode::NoContact: return "NoContact";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Schema: return "Schema";
  }
  return "Unknown";
}

}  // namespace artopen
