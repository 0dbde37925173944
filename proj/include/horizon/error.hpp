#pragma once

#include <stdexcept>
#include <string>

namespace horizon {

// Base of every error raised by the library. Precondition failures derive
// from InvalidArgument; everything else signals a computation failure.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

#define HORIZON_DEFINE_ERROR(Name, Base) \
  class Name : public Base {             \
   public:                               \
    using Base::Base;                    \
  };

HORIZON_DEFINE_ERROR(ContourOutOfRange, InvalidArgument)
HORIZON_DEFINE_ERROR(HoelderViolation, InvalidArgument)
HORIZON_DEFINE_ERROR(IndexOutOfBounds, InvalidArgument)
HORIZON_DEFINE_ERROR(KernelTooLarge, InvalidArgument)
HORIZON_DEFINE_ERROR(OddN, InvalidArgument)
HORIZON_DEFINE_ERROR(MissingCleanImage, InvalidArgument)
HORIZON_DEFINE_ERROR(DeltaTooLarge, InvalidArgument)
HORIZON_DEFINE_ERROR(WindowTooSmall, InvalidArgument)
HORIZON_DEFINE_ERROR(NotPowerOfTwo, InvalidArgument)
HORIZON_DEFINE_ERROR(DomainError, InvalidArgument)
HORIZON_DEFINE_ERROR(DegenerateFit, Error)

#undef HORIZON_DEFINE_ERROR

}  // namespace horizon
