#include "bgerbe/error.hpp"

namespace bgerbe {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::NotUnitary: return "not-unitary";
    case ErrorKind::NotSkewHermitian: return "not-skew-hermitian";
    case ErrorKind::AmbiguousClustering: return "ambiguous-clustering";
    case ErrorKind::Incomparable: return "incomparable";
    case ErrorKind::Boundary: return "boundary";
    case ErrorKind::BranchCut: return "branch-cut";
    case ErrorKind::IllConditionedCut: return "ill-conditioned-cut";
    case ErrorKind::EmptyInterior: return "empty-interior";
    case ErrorKind::Evaluation: return "evaluation";
    case ErrorKind::UnsupportedOrder: return "unsupported-order";
    case ErrorKind::EmptySpace: return "empty-space";
    case ErrorKind::StepTooLarge: return "step-too-large";
    case ErrorKind::Gap: return "gap";
    case ErrorKind::BaseMismatch: return "base-mismatch";
    case ErrorKind::SlotMismatch: return "slot-mismatch";
    case ErrorKind::Realignment: return "realignment";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::NotRegular: return "not-regular";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::UnknownSuite: return "unknown-suite";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace bgerbe
