#pragma once
// Model functions of a rank-one singular perturbation:
//
//   beta(z)  = kappa + sum_n (1/(t_n - z) - 1/t_n) a_n conj(b_n) mu_n
//   rho(z)   = delta + sum_n (1/(t_n - z) - 1/t_n) |b_n|^2 mu_n
//   Theta(z) = (i - rho(z)) / (i + rho(z))
//   phi(z)   = beta(z) (1 + Theta(z)) / 2,   phi~(z) = Theta(z) conj(phi(conj z))
//
// Evaluation near an atom t_k works with the regularized pair
// s = t_k - z,  F^(z) = s F(z) = w_k + s * (rest of F), so Theta and phi stay
// finite (and exact at the atoms) without any cancellation.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "splab/poly.hpp"
#include "splab/spectral_data.hpp"
#include "splab/types.hpp"

namespace splab::model {

inline constexpr double kPoleGuardRel = 1e-8;
inline constexpr std::size_t kMaxRationalDegree = 512;

/// F(z) = c0 + sum_n (1/(t_n - z) - 1/t_n) w_n with real, sorted, nonzero poles.
class CauchyRepresentation {
 public:
  CauchyRepresentation(RealVec poles, ComplexVec residues, Complex constant);

  std::span<const double> poles() const noexcept { return t_; }
  std::span<const Complex> residues() const noexcept { return w_; }
  Complex constant() const noexcept { return c0_; }
  std::size_t size() const noexcept { return t_.size(); }

  /// Regularized value at z relative to the nearest pole t_k.
  struct Local {
    std::size_t k = 0;
    Complex s{};          ///< t_k - z
    Complex hat{};        ///< s * F(z)
    Complex hat_prime{};  ///< d/dz (s * F(z))
    Complex sum_sq{};     ///< sum_{n != k} w_n / (t_n - z)^2
  };
  Local local(Complex z) const;

  /// Throws Error(EvaluationAtPole) within kPoleGuardRel * (1 + |t_k|) of a pole.
  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;
  /// lim F(iy), y -> inf, which equals c0 - sum w_n / t_n.
  Complex at_infinity() const noexcept { return c0_ - sum_w_over_t_; }
  /// Pole guard radius at atom k.
  double guard(std::size_t k) const noexcept { return kPoleGuardRel * (1.0 + std::abs(t_[k])); }
  std::size_t nearest(double x) const noexcept;

 private:
  RealVec t_;
  ComplexVec w_;
  RealVec wr_, wi_;
  Complex c0_;
  Complex sum_w_over_t_;
};

enum class Which { Beta, Rho, Theta, Phi, PhiTilde };

struct ModelOptions {
  /// Free real constant of rho; defaults to sum nu_n / t_n (rho = B/A exactly).
  std::optional<double> delta;
  /// When false the model is built even if kappa equals omega.
  bool enforce_admissibility = true;
};

/// Numerator/denominator polynomials of the model functions:
///   rho = p_rho / q,  beta = n_beta / q,
///   Theta = (i q - p_rho) / (i q + p_rho),  phi = i n_beta / (i q + p_rho),
///   phi~ = i n_beta_conj / (i q + p_rho)  (n_beta_conj built from conj(kappa), conj(w)).
struct RationalForm {
  poly::Poly q;
  poly::Poly p_rho;
  poly::Poly n_beta;
  poly::Poly n_beta_conj;

  poly::Poly phi_numerator() const;
  poly::Poly phi_tilde_numerator() const;
  poly::Poly theta_numerator() const;
  poly::Poly denominator() const;
};

/// The model pair (Theta, phi) with its building blocks. Immutable.
class ModelPair {
 public:
  ModelPair(const data::RankOneData& data, ModelOptions opts = {});

  const CauchyRepresentation& beta() const noexcept { return beta_; }
  const CauchyRepresentation& rho() const noexcept { return rho_; }
  double delta() const noexcept { return delta_; }
  std::size_t size() const noexcept { return beta_.size(); }
  std::span<const double> atoms() const noexcept { return beta_.poles(); }
  /// nu_n = |b_n|^2 mu_n
  std::span<const double> nu() const noexcept { return nu_; }
  Complex kappa() const noexcept { return beta_.constant(); }

  Complex eval(Which which, Complex z) const;
  Complex theta(Complex z) const;
  Complex phi(Complex z) const;
  Complex phi_tilde(Complex z) const;
  Complex theta_derivative(Complex z) const;
  /// phi'(z) / phi(z)
  Complex phi_log_derivative(Complex z) const;
  /// (phi(z), phi'(z))
  std::pair<Complex, Complex> phi_with_derivative(Complex z) const;
  Complex theta_at_infinity() const noexcept;
  Complex phi_at_infinity() const noexcept;

  bool has_rational_form() const noexcept { return size() <= kMaxRationalDegree; }
  /// Throws Error(DegreeOverflow) beyond kMaxRationalDegree atoms.
  const RationalForm& rational() const;

 private:
  CauchyRepresentation beta_;
  CauchyRepresentation rho_;
  CauchyRepresentation beta_conj_;
  RealVec nu_;
  double delta_;
  struct Lazy;
  std::shared_ptr<Lazy> lazy_;
};

ModelPair build_model(const data::RankOneData& data, ModelOptions opts = {});

/// E = A - iB with A(z) = prod (1 - z/t_n) and B/A = sum nu_n / (t_n - z).
class DeBrangesPair {
 public:
  explicit DeBrangesPair(const data::RankOneData& data);
  DeBrangesPair(RealVec t, RealVec nu);

  Complex A(Complex z) const;
  Complex B(Complex z) const;
  Complex E(Complex z) const { return A(z) - kI * B(z); }
  /// E*(z) = conj(E(conj z)) = A(z) + i B(z) for real-coefficient A, B.
  Complex E_star(Complex z) const { return A(z) + kI * B(z); }
  std::span<const double> zeros() const noexcept { return t_; }
  std::span<const double> nu() const noexcept { return nu_; }

  /// Coefficients in the monomial basis (at most kMaxRationalDegree atoms).
  poly::Poly A_poly() const;
  poly::Poly B_poly() const;

  /// Reproducing kernel of H(E) at w, evaluated at z.
  Complex kernel(Complex w, Complex z) const;

 private:
  CauchyRepresentation herglotz_;  // sum nu/(t - z)
  RealVec t_;
  RealVec nu_;
};

DeBrangesPair build_debranges(const data::RankOneData& data);

struct ClarkMeasure {
  Complex zeta{};
  RealVec atoms;
  RealVec weights;
  double p = 0.0;   ///< point mass at infinity (linear term)
  double q = 0.0;
  bool mass_at_infinity = false;
  /// max_m |Theta(atom_m) - zeta|
  double atom_residual = 0.0;
};

/// Clark measure sigma_zeta. When zeta equals Theta(inf) one atom escapes to
/// infinity and p > 0; with strict = true that case throws DegenerateZeta.
ClarkMeasure clark_measure(const ModelPair& model, Complex zeta, bool strict = false);

/// k_lambda(z) = (1 - conj(Theta(lambda)) Theta(z)) / (z - conj(lambda))
Complex kernel_k(const ModelPair& model, Complex lambda, Complex z);
/// k~_lambda(z) = (Theta(z) - Theta(lambda)) / (z - lambda)
Complex kernel_k_tilde(const ModelPair& model, Complex lambda, Complex z);
Complex debranges_kernel(const DeBrangesPair& pair, Complex w, Complex z);

/// U_zeta u (z) = sqrt(pi) (zeta - Theta(z)) sum_m u_m weight_m / (t'_m - z)
class ClarkTransform {
 public:
  /// Throws Error(MassPresent) when clark.p > 0.
  ClarkTransform(const ClarkMeasure& clark, const ModelPair& model, ComplexVec u);

  Complex operator()(Complex z) const;
  /// ||U u||^2 in L^2(R, dx) by adaptive quadrature.
  double lebesgue_norm_sq(double rel_tol = 1e-11) const;
  /// pi * sum_m |f(x_m)|^2 w_m of f = U u over another Clark measure.
  double discrete_norm_sq(const ClarkMeasure& over) const;
  /// sum_m |u_m|^2 weight_m
  double coefficient_norm_sq() const;

 private:
  const ModelPair* model_;
  ClarkMeasure clark_;
  ComplexVec u_;
};

/// <f, g> = pi sum_n f(t_n) conj(g(t_n)) nu_n over sigma_{-1} = nu.
template <class F, class G>
Complex clark_inner(const ModelPair& model, F&& f, G&& g) {
  Complex s{};
  for (std::size_t n = 0; n < model.size(); ++n) {
    const double t = model.atoms()[n];
    s += f(Complex(t)) * std::conj(g(Complex(t))) * model.nu()[n];
  }
  return kPi * s;
}

}  // namespace splab::model
