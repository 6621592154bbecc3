#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dms {

enum class Errc {
  DegenerateFacet,
  DuplicateFacet,
  DuplicateCell,
  NonPseudomanifold,
  MissingFace,
  BadDimensionDrop,
  MalformedCell,
  BoundaryNotCycle,
  UnknownCell,
  NotClosedSurface,
  BadDimension,
  MissingValue,
  InvalidFunction,
  InvalidField,
  MultipleRoots,
  SplitDetected,
  StartIsCritical,
  InconsistentField,
  CyclicField,
  NotAnEdge,
  NotA2Cell,
  BadChord,
  NotTopCell,
  NotSimplex,
  VertexNotOnCell,
  NotPerfectInput,
  DimensionMismatch,
  NoEligibleBeta,
  WrongCriticalCount,
  WrongGenus,
  PathEscapes,
  NoFlankingCells,
  NotSeparating,
  UnbalancedBoundaryCriticals,
  BoundaryCriticalPresent,
  NonOrientableInput,
  Disconnected,
  ParseError,
  IoError,
  Internal,
};

std::string_view errc_name(Errc code);

// Broad category used by the C API and CLI to pick status and exit codes.
enum class ErrorClass { Parse, Io, Precondition, Validation, Internal };
ErrorClass error_class(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::string cell = {});
  Errc code() const noexcept { return code_; }
  const std::string& cell() const noexcept { return cell_; }

 private:
  Errc code_;
  std::string cell_;
};

}  // namespace dms
