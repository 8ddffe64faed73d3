#pragma once
#include <complex>
#include <stdexcept>
#include <string>

namespace noongen {

/// Configuration file or run-parameter problem. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A state, table or spectrum that is identically zero where a nonzero
/// object is required (normalizing the zero state, spectrum of an empty
/// table, ...).
class DegenerateError : public std::invalid_argument {
public:
  explicit DegenerateError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Radial quadrature failed its self-check: the estimate moved by more than
/// the requested relative tolerance when the node count was doubled.
/// Carries both estimates so callers can report them. Maps to CLI exit code 3.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& msg, std::complex<double> coarse,
                   std::complex<double> fine)
      : std::runtime_error(msg), coarse_estimate(coarse), fine_estimate(fine) {}

  std::complex<double> coarse_estimate;
  std::complex<double> fine_estimate;
};

}  // namespace noongen
