#pragma once

#include <stdexcept>
#include <string>

namespace jcr {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Schedule does not fit inside the coherent processing interval.
struct ScheduleTooLong : Error {
  using Error::Error;
};

/// No valid family parameters exist for the requested element budget.
struct InfeasibleBudget : Error {
  using Error::Error;
};

/// Total preamble plus interframe time exceeds the CPI.
struct OverheadExceedsCpi : Error {
  using Error::Error;
};

/// A target velocity falls outside the unambiguous interval for the slot spacing.
struct VelocityAliased : Error {
  using Error::Error;
};

/// Water-filling input had no usable subchannel.
struct AllZeroGains : Error {
  using Error::Error;
};

/// A scalar metric was requested for a bound that does not exist.
struct CrbDoesNotExist : Error {
  using Error::Error;
};

/// Estimator asked for more targets than the covariance can support.
struct TooManyTargets : Error {
  using Error::Error;
};

/// Co-waveform too short for the requested source count.
struct CoArrayTooSmall : Error {
  using Error::Error;
};

/// Pseudo-spectrum produced fewer peaks than requested targets.
struct DegenerateSpectrum : Error {
  using Error::Error;
};

/// A sweep produced no feasible operating point.
struct NoFeasiblePoints : Error {
  using Error::Error;
};

/// A constrained design problem has an empty feasible set.
struct ConstraintInfeasible : Error {
  using Error::Error;
};

/// Configuration file or override is malformed.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace jcr
