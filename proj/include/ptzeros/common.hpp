#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace ptzeros {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Failure categories raised by the numerical modules.
enum class ErrorKind {
  InvalidArgument,
  DegeneratePair,
  Overflow,
  StepUnderflow,
  BranchAmbiguity,
  PTViolation,
  NoConvergence,
  DerivativeVanishes,
  BranchFailure,
  LostPath,
  DegenerateFit,
  Io,
  Config,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// PT reflection x -> -conj(x).
inline Complex pt_mirror(Complex z) { return -std::conj(z); }

}  // namespace ptzeros
