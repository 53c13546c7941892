#pragma once
// Dense complex polynomials in the monomial basis (ascending coefficients)
// and companion-matrix rootfinding.

#include <cstddef>
#include <functional>
#include <span>

#include "splab/types.hpp"

namespace splab::poly {

/// c[0] + c[1] z + ... ; trailing zeros are allowed but `degree()` skips them.
class Poly {
 public:
  Poly() = default;
  explicit Poly(ComplexVec coeffs) : c_(std::move(coeffs)) {}
  static Poly constant(Complex c) { return Poly(ComplexVec{c}); }
  /// (1 - z / root)
  static Poly linear_normalized(double root);

  std::span<const Complex> coeffs() const noexcept { return c_; }
  Complex operator[](std::size_t k) const { return k < c_.size() ? c_[k] : Complex{}; }
  std::size_t size() const noexcept { return c_.size(); }
  /// Highest index with |c_k| > rel_tol * max|c|; 0 for the zero polynomial.
  std::size_t degree(double rel_tol = 0.0) const noexcept;
  double max_abs_coeff() const noexcept;

  Complex operator()(Complex z) const noexcept;
  Poly derivative() const;
  Poly conj() const;

  Poly& operator+=(const Poly& o);
  Poly& operator*=(Complex s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, Complex s) { return a *= s; }
  friend Poly operator*(Complex s, Poly a) { return a *= s; }

 private:
  ComplexVec c_;
};

struct DivisionResult {
  Poly quotient;
  Poly remainder;
};

DivisionResult divide(const Poly& num, const Poly& den);

/// Parlett-Reinsch balancing of a square matrix stored row-major, in place.
void balance(std::span<Complex> a, std::size_t n);

struct RootOptions {
  double leading_rel_tol = 1e-14;  ///< leading coefficients below this (relative) are dropped
  /// Optional pointwise evaluator f(z) -> (value, derivative) used for Newton polishing.
  std::function<std::pair<Complex, Complex>(Complex)> newton;
  int newton_iterations = 8;
};

/// Roots of p via the eigenvalues of its balanced companion matrix. The
/// variable is rescaled so the extreme coefficients have equal weight.
ComplexVec roots(const Poly& p, const RootOptions& opts = {});

}  // namespace splab::poly
