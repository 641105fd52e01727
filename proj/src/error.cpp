#include "treecmp/error.hpp"

namespace treecmp {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NotSquare:
      return "NotSquare";
    case Errc::NonFinite:
      return "NonFinite";
    case Errc::AsymmetricMatrix:
      return "AsymmetricMatrix";
    case Errc::NonzeroDiagonal:
      return "NonzeroDiagonal";
    case Errc::TriangleViolation:
      return "TriangleViolation";
    case Errc::DuplicatePoint:
      return "DuplicatePoint";
    case Errc::IndexOutOfRange:
      return "IndexOutOfRange";
    case Errc::MalformedMetricFile:
      return "MalformedMetricFile";
    case Errc::SyntaxError:
      return "SyntaxError";
    case Errc::DuplicateLabel:
      return "DuplicateLabel";
    case Errc::EmptyTree:
      return "EmptyTree";
    case Errc::NotATree:
      return "NotATree";
    case Errc::NotExpressible:
      return "NotExpressible";
    case Errc::UnassignedVertex:
      return "UnassignedVertex";
    case Errc::OverlappingColors:
      return "OverlappingColors";
    case Errc::InvalidProblem:
      return "InvalidProblem";
    case Errc::DistanceOutOfRange:
      return "DistanceOutOfRange";
    case Errc::DimensionMismatch:
      return "DimensionMismatch";
    case Errc::NotUnit:
      return "NotUnit";
    case Errc::NotTangent:
      return "NotTangent";
    case Errc::AntipodalLog:
      return "AntipodalLog";
    case Errc::ZeroBaseVector:
      return "ZeroBaseVector";
    case Errc::StepTooSmall:
      return "StepTooSmall";
    case Errc::StepTooLarge:
      return "StepTooLarge";
    case Errc::CutLocusContact:
      return "CutLocusContact";
    case Errc::SegmentLeavesTIL:
      return "SegmentLeavesTIL";
    case Errc::OutsideTIL:
      return "OutsideTIL";
    case Errc::NotShort:
      return "NotShort";
    case Errc::AngleOutOfRange:
      return "AngleOutOfRange";
    case Errc::NotAMetric:
      return "NotAMetric";
    case Errc::InvalidInput:
      return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace treecmp
