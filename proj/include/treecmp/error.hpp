#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace treecmp {

enum class Errc {
  // metric-core
  NotSquare,
  NonFinite,
  AsymmetricMatrix,
  NonzeroDiagonal,
  TriangleViolation,
  DuplicatePoint,
  IndexOutOfRange,
  MalformedMetricFile,
  // tree-lang
  SyntaxError,
  DuplicateLabel,
  EmptyTree,
  NotATree,
  NotExpressible,
  UnassignedVertex,
  OverlappingColors,
  // feasibility-solver
  InvalidProblem,
  DistanceOutOfRange,
  DimensionMismatch,
  // sphere-model
  NotUnit,
  NotTangent,
  AntipodalLog,
  ZeroBaseVector,
  StepTooSmall,
  StepTooLarge,
  CutLocusContact,
  SegmentLeavesTIL,
  OutsideTIL,
  NotShort,
  // pivotal / cli
  AngleOutOfRange,
  NotAMetric,
  InvalidInput,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// d[i][j] > d[i][k] + d[k][j]
class TriangleViolation : public Error {
 public:
  TriangleViolation(std::size_t i, std::size_t j, std::size_t k, const std::string& what)
      : Error(Errc::TriangleViolation, what), where_{i, j, k} {}
  const std::array<std::size_t, 3>& where() const noexcept { return where_; }

 private:
  std::array<std::size_t, 3> where_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& what)
      : Error(Errc::SyntaxError, what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace treecmp
