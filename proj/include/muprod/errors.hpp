#pragma once

#include <stdexcept>
#include <string>

namespace muprod {

// Thrown when an adaptive or truncated scheme cannot reach its tolerance.
// Carries the best available estimate so callers can decide what to do.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double partial, double error_estimate)
      : std::runtime_error(what), partial_(partial), error_estimate_(error_estimate) {}
  double partial() const { return partial_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double partial_;
  double error_estimate_;
};

// The Christoffel-Darboux kernel form is undefined on the diagonal; callers
// hitting this should fall back to the direct sum.
class ProximityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Requested index exceeds the prepared coefficient tables.
class CapacityError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace muprod
