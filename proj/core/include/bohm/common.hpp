#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bohm {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// Raised when inputs violate a documented precondition or numeric guard.
// The message always names the guard so callers can surface it verbatim.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when a computation cannot produce a meaningful result
// (zero norm, everywhere-zero state, missing snapshots).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Natural units by default. Both scalars are runtime values so that
// classical-limit sweeps can vary hbar.
struct Units {
  double hbar = 1.0;
  double mass = 1.0;
};

}  // namespace bohm
