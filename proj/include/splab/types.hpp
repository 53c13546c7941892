#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace splab {

using Complex = std::complex<double>;
using ComplexVec = std::vector<Complex>;
using RealVec = std::vector<double>;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Failure categories. Each maps onto one CLI exit code (see `exit_code`).
enum class ErrorKind {
  InvalidData,
  Admissibility,
  EvaluationAtPole,
  DegenerateZeta,
  MassPresent,
  NoInvertibleShift,
  EigensolveFailure,
  DegreeOverflow,
  ChainRequired,
  OrderTooHigh,
  SingularGauge,
  NotMinimal,
  DivergentNearRealZero,
  NotBiorthogonal,
  ContourTooClose,
  BadParameters,
  NearPole,
  ExhaustedInput,
  BisectionFailure,
  DecayViolation,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// 2 for bad input, 3 for a tolerance failure, 4 for numerical failure.
int exit_code(ErrorKind kind) noexcept;

}  // namespace splab
