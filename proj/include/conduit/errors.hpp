#pragma once

#include <stdexcept>
#include <string>

namespace conduit {

/// Invalid input: bad arguments, points outside the existence region, bad config.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// An iterative or adaptive procedure failed to meet its tolerance.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define CONDUIT_ERROR(Name, Base)                                   \
  class Name : public Base {                                        \
  public:                                                           \
    explicit Name(const std::string& what) : Base(#Name ": " + what) {} \
  };

CONDUIT_ERROR(RegionError, DomainError)
CONDUIT_ERROR(AmplitudeTooLarge, DomainError)
CONDUIT_ERROR(ConfigError, DomainError)

CONDUIT_ERROR(RootNotConverged, NumericalError)
CONDUIT_ERROR(QuadratureNotConverged, NumericalError)
CONDUIT_ERROR(OdeNotConverged, NumericalError)
CONDUIT_ERROR(EnergyDriftError, NumericalError)
CONDUIT_ERROR(SteppingError, NumericalError)
CONDUIT_ERROR(NewtonNotConverged, NumericalError)
CONDUIT_ERROR(SingularJacobian, NumericalError)
CONDUIT_ERROR(EigenSolveError, NumericalError)
CONDUIT_ERROR(IllConditioned, NumericalError)
CONDUIT_ERROR(TrackingAmbiguous, NumericalError)
CONDUIT_ERROR(PositivityLost, NumericalError)
CONDUIT_ERROR(SolveError, NumericalError)

#undef CONDUIT_ERROR

}  // namespace conduit
