#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chabauty {

enum class ErrorCode {
  NonClosedInput,
  DimensionMismatch,
  EnumerationBudgetExceeded,
  SingularMatrix,
  InvalidType,
  WrongAmbientDim,
  NotDecomposable,
  FlagsTooFar,
  NotInNeighborhood,
  InconsistentData,
  OutOfRange,
  InvalidStratum,
  InvalidPair,
  NotUnitSystole,
  NotLattice,
  NotInC1,
  SingularBasePoint,
  Unstable,
  InvalidArgument,
};

std::string_view code_name(ErrorCode code);

/// Domain error raised by every operation in the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace chabauty
