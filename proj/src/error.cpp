#include "cafe/error.hpp"

namespace cafe {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::PoleSingularity: return "pole-singularity";
    case ErrorKind::UnsupportedSymmetry: return "unsupported-symmetry";
    case ErrorKind::NotEvaluable: return "not-evaluable";
    case ErrorKind::InfiniteSlew: return "infinite-slew";
    case ErrorKind::AccuracyFailure: return "accuracy-failure";
    case ErrorKind::DimensionCap: return "dimension-cap";
    case ErrorKind::StepSizeFailure: return "step-size-failure";
    case ErrorKind::ResolutionError: return "resolution-error";
    case ErrorKind::RegimeViolation: return "regime-violation";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
{
}

AccuracyFailure::AccuracyFailure(const std::string& what, double estimate)
    : Error(ErrorKind::AccuracyFailure, what + " (estimate " + std::to_string(estimate) + ")"),
      estimate_(estimate)
{
}

}  // namespace cafe
