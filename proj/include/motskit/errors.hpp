#pragma once

#include <stdexcept>
#include <string>

namespace motskit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MOTSKIT_DEFINE_ERROR(Name)          \
  class Name : public Error {               \
   public:                                  \
    explicit Name(const std::string& what)  \
        : Error(#Name ": " + what) {}       \
  }

MOTSKIT_DEFINE_ERROR(InvalidParameter);
MOTSKIT_DEFINE_ERROR(OutsideChart);
MOTSKIT_DEFINE_ERROR(SingularMetric);
MOTSKIT_DEFINE_ERROR(DegenerateMetric);
MOTSKIT_DEFINE_ERROR(OffsetOutOfDomain);
MOTSKIT_DEFINE_ERROR(NotAMOTS);
MOTSKIT_DEFINE_ERROR(NoConvergence);
MOTSKIT_DEFINE_ERROR(DivergingProfile);
MOTSKIT_DEFINE_ERROR(EigensolverFailure);
MOTSKIT_DEFINE_ERROR(ZeroCandidate);
MOTSKIT_DEFINE_ERROR(ConfigError);

#undef MOTSKIT_DEFINE_ERROR

}  // namespace motskit
