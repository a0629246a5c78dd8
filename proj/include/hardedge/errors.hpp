#pragma once

#include <stdexcept>
#include <string>

namespace hardedge {

// Every failure raised by the library derives from Error so callers can
// catch the whole family at once; the concrete type names the condition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HARDEDGE_DEFINE_ERROR(Name)          \
  class Name : public Error {                \
   public:                                   \
    explicit Name(const std::string& what)   \
        : Error(#Name ": " + what) {}        \
  }

HARDEDGE_DEFINE_ERROR(SingularInput);
HARDEDGE_DEFINE_ERROR(DomainError);
HARDEDGE_DEFINE_ERROR(RangeError);
HARDEDGE_DEFINE_ERROR(StepLimitExceeded);
HARDEDGE_DEFINE_ERROR(NonFiniteState);
HARDEDGE_DEFINE_ERROR(NonFiniteValue);
HARDEDGE_DEFINE_ERROR(ShootingFailed);
HARDEDGE_DEFINE_ERROR(ConstraintViolated);
HARDEDGE_DEFINE_ERROR(InstabilityDetected);
HARDEDGE_DEFINE_ERROR(GridTooCoarse);
HARDEDGE_DEFINE_ERROR(EmptySample);
HARDEDGE_DEFINE_ERROR(ConvergenceFailed);

#undef HARDEDGE_DEFINE_ERROR

}  // namespace hardedge
