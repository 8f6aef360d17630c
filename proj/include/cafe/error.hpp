#pragma once

#include <stdexcept>
#include <string>

namespace cafe {

enum class ErrorKind {
    InvalidParameter,
    PoleSingularity,
    UnsupportedSymmetry,
    NotEvaluable,
    InfiniteSlew,
    AccuracyFailure,
    DimensionCap,
    StepSizeFailure,
    ResolutionError,
    RegimeViolation,
};

const char* to_string(ErrorKind kind);

/// Single exception type for every domain failure; `kind()` tells callers
/// which contract was violated.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Quadrature or integrator that could not reach its tolerance.
class AccuracyFailure : public Error {
public:
    AccuracyFailure(const std::string& what, double estimate);

    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

inline void require(bool cond, const std::string& msg)
{
    if (!cond) throw Error(ErrorKind::InvalidParameter, msg);
}

}  // namespace cafe
