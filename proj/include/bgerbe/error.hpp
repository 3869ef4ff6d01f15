#pragma once

#include <stdexcept>
#include <string>

namespace bgerbe {

enum class ErrorKind {
  Dimension,
  NotUnitary,
  NotSkewHermitian,
  AmbiguousClustering,
  Incomparable,
  Boundary,
  BranchCut,
  IllConditionedCut,
  EmptyInterior,
  Evaluation,
  UnsupportedOrder,
  EmptySpace,
  StepTooLarge,
  Gap,
  BaseMismatch,
  SlotMismatch,
  Realignment,
  Domain,
  NotRegular,
  Schema,
  UnknownSuite,
  Config,
};

const char* to_string(ErrorKind kind);

// All library failures surface as this one exception type; callers switch on
// kind() when they need to distinguish ill-conditioned inputs from bugs.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace bgerbe
