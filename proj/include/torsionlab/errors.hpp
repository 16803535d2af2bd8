#pragma once

#include <stdexcept>
#include <string>

namespace torsionlab {

/// Stable error categories. The numeric values are shared with the C API
/// (see torsionlab.h) and with the CLI exit-code contract.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kConstraintViolated = 2,
  kPrecisionExhausted = 3,
  kZeroDivision = 4,
  kNotAComplex = 5,
  kFiberOnBoundary = 6,
  kEmptyInterior = 7,
  kStepFailure = 8,
  kUnboundedDomain = 9,
  kNonCompact = 10,
  kParse = 11,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define TORSIONLAB_DEFINE_ERROR(Name, Code)                                    \
  class Name : public Error {                                                 \
   public:                                                                    \
    explicit Name(const std::string& what) : Error(ErrorCode::Code, what) {}  \
  };

TORSIONLAB_DEFINE_ERROR(InvalidArgument, kInvalidArgument)
TORSIONLAB_DEFINE_ERROR(ConstraintViolated, kConstraintViolated)
TORSIONLAB_DEFINE_ERROR(PrecisionExhausted, kPrecisionExhausted)
TORSIONLAB_DEFINE_ERROR(ZeroDivision, kZeroDivision)
TORSIONLAB_DEFINE_ERROR(NotAComplex, kNotAComplex)
TORSIONLAB_DEFINE_ERROR(FiberOnBoundary, kFiberOnBoundary)
TORSIONLAB_DEFINE_ERROR(EmptyInterior, kEmptyInterior)
TORSIONLAB_DEFINE_ERROR(StepFailure, kStepFailure)
TORSIONLAB_DEFINE_ERROR(UnboundedDomain, kUnboundedDomain)
TORSIONLAB_DEFINE_ERROR(NonCompact, kNonCompact)
TORSIONLAB_DEFINE_ERROR(ParseError, kParse)

#undef TORSIONLAB_DEFINE_ERROR

}  // namespace torsionlab
