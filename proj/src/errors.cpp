#include "mpt/errors.hpp"

namespace mpt {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::NegativeRate: return "NegativeRate";
    case ErrorKind::InvalidRate: return "InvalidRate";
    case ErrorKind::UnknownState: return "UnknownState";
    case ErrorKind::DuplicateState: return "DuplicateState";
    case ErrorKind::SolveFailure: return "SolveFailure";
    case ErrorKind::OverlappingSets: return "OverlappingSets";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::ZeroCapacity: return "ZeroCapacity";
    case ErrorKind::NotReversible: return "NotReversible";
    case ErrorKind::InfeasibleFunction: return "InfeasibleFunction";
    case ErrorKind::InfeasibleFlow: return "InfeasibleFlow";
    case ErrorKind::ZeroNormFlow: return "ZeroNormFlow";
    case ErrorKind::EmptyCollapseSet: return "EmptyCollapseSet";
    case ErrorKind::FullCollapseSet: return "FullCollapseSet";
    case ErrorKind::NonConstantOnCollapseSet: return "NonConstantOnCollapseSet";
    case ErrorKind::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::FrontierExplosion: return "FrontierExplosion";
    case ErrorKind::DimensionOrder: return "DimensionOrder";
    case ErrorKind::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorKind::ValleysOverlap: return "ValleysOverlap";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace mpt
