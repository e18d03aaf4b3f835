#pragma once

#include <stdexcept>
#include <string>

namespace cuspsieve {

/// Raised when a requested table or enumeration would exceed its configured cap.
class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a caller-supplied object violates an operation's precondition
/// (e.g. a point set that is not well spaced, or a base point that is not a cusp).
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for inconsistent parameter bundles (transference driver, CLI).
class parameter_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cuspsieve
