#pragma once

#include <stdexcept>
#include <string>

namespace ddosc {

/// Argument outside the domain of a function (negative frequency, time off a segment, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Physical or control parameters that cannot describe a valid model or schedule.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown: non-convergence, instability, ill-conditioning.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Amplitudes that left the physical region |A1|^2 + |A2|^2 <= 1.
class PhysicalityError : public std::runtime_error {
 public:
  PhysicalityError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Caller violated an interface contract (mismatched grids, empty window, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ddosc
