#include "error.hpp"

namespace dms {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::DegenerateFacet: return "DegenerateFacet";
    case Errc::DuplicateFacet: return "DuplicateFacet";
    case Errc::DuplicateCell: return "DuplicateCell";
    case Errc::NonPseudomanifold: return "NonPseudomanifold";
    case Errc::MissingFace: return "MissingFace";
    case Errc::BadDimensionDrop: return "BadDimensionDrop";
    case Errc::MalformedCell: return "MalformedCell";
    case Errc::BoundaryNotCycle: return "BoundaryNotCycle";
    case Errc::UnknownCell: return "UnknownCell";
    case Errc::NotClosedSurface: return "NotClosedSurface";
    case Errc::BadDimension: return "BadDimension";
    case Errc::MissingValue: return "MissingValue";
    case Errc::InvalidFunction: return "InvalidFunction";
    case Errc::InvalidField: return "InvalidField";
    case Errc::MultipleRoots: return "MultipleRoots";
    case Errc::SplitDetected: return "SplitDetected";
    case Errc::StartIsCritical: return "StartIsCritical";
    case Errc::InconsistentField: return "InconsistentField";
    case Errc::CyclicField: return "CyclicField";
    case Errc::NotAnEdge: return "NotAnEdge";
    case Errc::NotA2Cell: return "NotA2Cell";
    case Errc::BadChord: return "BadChord";
    case Errc::NotTopCell: return "NotTopCell";
    case Errc::NotSimplex: return "NotSimplex";
    case Errc::VertexNotOnCell: return "VertexNotOnCell";
    case Errc::NotPerfectInput: return "NotPerfectInput";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NoEligibleBeta: return "NoEligibleBeta";
    case Errc::WrongCriticalCount: return "WrongCriticalCount";
    case Errc::WrongGenus: return "WrongGenus";
    case Errc::PathEscapes: return "PathEscapes";
    case Errc::NoFlankingCells: return "NoFlankingCells";
    case Errc::NotSeparating: return "NotSeparating";
    case Errc::UnbalancedBoundaryCriticals: return "UnbalancedBoundaryCriticals";
    case Errc::BoundaryCriticalPresent: return "BoundaryCriticalPresent";
    case Errc::NonOrientableInput: return "NonOrientableInput";
    case Errc::Disconnected: return "Disconnected";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

ErrorClass error_class(Errc code) {
  switch (code) {
    case Errc::DegenerateFacet:
    case Errc::DuplicateFacet:
    case Errc::DuplicateCell:
    case Errc::MissingFace:
    case Errc::BadDimensionDrop:
    case Errc::MalformedCell:
    case Errc::BoundaryNotCycle:
    case Errc::UnknownCell:
    case Errc::MissingValue:
    case Errc::ParseError:
      return ErrorClass::Parse;
    case Errc::IoError:
      return ErrorClass::Io;
    case Errc::InvalidFunction:
    case Errc::InvalidField:
    case Errc::CyclicField:
      return ErrorClass::Validation;
    case Errc::Internal:
    case Errc::SplitDetected:
    case Errc::PathEscapes:
      return ErrorClass::Internal;
    default:
      return ErrorClass::Precondition;
  }
}

Error::Error(Errc code, const std::string& message, std::string cell)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code),
      cell_(std::move(cell)) {}

}  // namespace dms
