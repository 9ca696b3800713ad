#pragma once

#include <stdexcept>
#include <string>

namespace confext {

/// Successive quadrature refinements disagreed beyond the requested tolerance.
class NonConvergent : public std::runtime_error {
 public:
  explicit NonConvergent(const std::string& what) : std::runtime_error(what) {}
};

/// The integrand does not decay fast enough for absolute convergence on an unbounded domain.
class BadDecay : public std::invalid_argument {
 public:
  explicit BadDecay(const std::string& what) : std::invalid_argument(what) {}
};

/// An argument lies outside the domain where an operation is defined.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Input rejected by an admissibility check (harmonicity, sign conditions, cost guards).
class Inadmissible : public std::invalid_argument {
 public:
  explicit Inadmissible(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace confext
