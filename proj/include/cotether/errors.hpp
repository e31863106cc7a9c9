#ifndef COTETHER_ERRORS_HPP
#define COTETHER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cotether {

// Near-equal rate parameters make the partial-fraction forms numerically
// meaningless; callers should perturb the parameters or fall back to
// Monte Carlo.
class IllConditionedError : public std::runtime_error {
 public:
  explicit IllConditionedError(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration would exceed the configured search cap.
class CapExceededError : public std::runtime_error {
 public:
  CapExceededError(const std::string& what, unsigned long long required)
      : std::runtime_error(what), required_evaluations(required) {}
  unsigned long long required_evaluations;
};

// Adaptive quadrature could not reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_error(achieved) {}
  double achieved_error;
};

}  // namespace cotether

#endif  // COTETHER_ERRORS_HPP
