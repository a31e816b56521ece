#pragma once

#include <stdexcept>
#include <string>

namespace spinform {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SPINFORM_DEFINE_ERROR(Name)       \
  class Name : public Error {             \
   public:                                \
    explicit Name(const std::string& what) \
        : Error(#Name ": " + what) {}     \
  }

SPINFORM_DEFINE_ERROR(MixedFields);
SPINFORM_DEFINE_ERROR(DivisionByZero);
SPINFORM_DEFINE_ERROR(ZeroInput);
SPINFORM_DEFINE_ERROR(InvalidField);
SPINFORM_DEFINE_ERROR(DimensionMismatch);
SPINFORM_DEFINE_ERROR(Singular);
SPINFORM_DEFINE_ERROR(SingularForm);
SPINFORM_DEFINE_ERROR(WrongField);
SPINFORM_DEFINE_ERROR(NotAnIsometry);
SPINFORM_DEFINE_ERROR(MembershipFailure);
SPINFORM_DEFINE_ERROR(UnsupportedGroup);
SPINFORM_DEFINE_ERROR(NoIntertwiner);
SPINFORM_DEFINE_ERROR(FactorizationMissing);
SPINFORM_DEFINE_ERROR(RankMismatch);
SPINFORM_DEFINE_ERROR(NotACocycle);
SPINFORM_DEFINE_ERROR(DegenerateCover);
SPINFORM_DEFINE_ERROR(InvalidPlan);
SPINFORM_DEFINE_ERROR(ParseError);

#undef SPINFORM_DEFINE_ERROR

}  // namespace spinform
