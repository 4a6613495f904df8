#ifndef NESTAR_ERRORS_HPP
#define NESTAR_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace nestar {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid configuration (bad parameters, bad config file). CLI exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

/// Operation called outside its parameter regime (e.g. delta_int with n2 <= n_ap).
struct RegimeError : Error {
  using Error::Error;
};

/// No local minimum found in the scanned beam pattern.
struct DegeneratePatternError : Error {
  using Error::Error;
};

/// Matrix/vector dimensions do not match.
struct DimensionError : Error {
  using Error::Error;
};

/// Fewer spectral peaks than requested sources; carries whatever was found.
struct UnderResolutionError : Error {
  UnderResolutionError(const std::string& msg, std::vector<double> found)
      : Error(msg), found_angles(std::move(found)) {}
  std::vector<double> found_angles;  // radians, sorted
};

}  // namespace nestar

#endif
