#ifndef MPT_ERRORS_HPP
#define MPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mpt {

enum class ErrorKind {
  NotIrreducible,
  NegativeRate,
  InvalidRate,
  UnknownState,
  DuplicateState,
  SolveFailure,
  OverlappingSets,
  EmptySet,
  ZeroCapacity,
  NotReversible,
  InfeasibleFunction,
  InfeasibleFlow,
  ZeroNormFlow,
  EmptyCollapseSet,
  FullCollapseSet,
  NonConstantOnCollapseSet,
  StateSpaceTooLarge,
  CapExceeded,
  FrontierExplosion,
  DimensionOrder,
  AlphaOutOfRange,
  ValleysOverlap,
  BudgetExceeded,
  InvalidArgument,
  ParseError,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mpt

#endif
