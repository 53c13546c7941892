#pragma once

#include <functional>
#include <span>

#include "splab/types.hpp"

namespace splab::quad {

using Integrand = std::function<Complex(double)>;

struct Result {
  Complex value{};
  double error = 0.0;
  long evaluations = 0;
};

/// Adaptive 7/15-point Gauss-Kronrod on [a, b].
Result adaptive_gk(const Integrand& f, double a, double b, double abs_tol,
                   double rel_tol, int max_depth = 48);

struct LineResult {
  Complex value{};       ///< integral over [-R, R]
  double error = 0.0;    ///< quadrature error estimate on [-R, R]
  double tail_bound = 0.0;  ///< estimated |integral| over |x| > R
  double radius = 0.0;   ///< R
  long evaluations = 0;
};

/// Integral over the real line. The finite part is split at `breakpoints`
/// and at geometrically growing panels; R doubles until the power-law tail
/// estimate (fitted from |f| at R and 2R) falls below tail_rel * |integral|.
LineResult integrate_real_line(const Integrand& f, std::span<const double> breakpoints,
                               double rel_tol = 1e-11, double tail_rel = 1e-8,
                               double max_radius = 1e14);

struct Rule {
  RealVec nodes;    ///< on [-1, 1]
  RealVec weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n).
const Rule& gauss_legendre(int n);

}  // namespace splab::quad
