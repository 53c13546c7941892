#pragma once
// Discrete spectral data of the unperturbed operator, rank-one and rank-n
// perturbation data, and the admissibility conditions attached to them.

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "splab/types.hpp"

namespace splab::data {

struct Atom {
  double t = 0.0;   ///< spectral point, nonzero
  double mu = 0.0;  ///< mass, > 0
};

/// Atoms of a discrete measure with 0 outside the support. Immutable.
class DiscreteSpectralData {
 public:
  /// Throws Error(InvalidData) unless t != 0, mu > 0 and t strictly increasing.
  explicit DiscreteSpectralData(std::vector<Atom> atoms);

  std::size_t size() const noexcept { return t_.size(); }
  std::span<const double> t() const noexcept { return t_; }
  std::span<const double> mu() const noexcept { return mu_; }
  double t(std::size_t n) const { return t_[n]; }
  double mu(std::size_t n) const { return mu_[n]; }
  std::vector<Atom> atoms() const;
  /// Atom indices ordered by |t| ascending (summation order).
  std::span<const std::size_t> abs_order() const noexcept { return order_; }
  /// Index of the atom closest to x.
  std::size_t nearest(double x) const noexcept;
  /// max |t_n|
  double scale() const noexcept;

  /// The same atoms with every t_n replaced by t_n - shift.
  DiscreteSpectralData shifted(double shift) const;

 private:
  std::vector<double> t_;
  std::vector<double> mu_;
  std::vector<std::size_t> order_;
};

/// Scalar rank-one data (a_n, b_n, kappa). Immutable.
class RankOneData {
 public:
  /// Throws Error(InvalidData) when lengths disagree, every a_n is zero, or
  /// some b_n is zero.
  RankOneData(DiscreteSpectralData base, ComplexVec a, ComplexVec b,
              Complex kappa);

  const DiscreteSpectralData& base() const noexcept { return base_; }
  std::size_t size() const noexcept { return base_.size(); }
  std::span<const Complex> a() const noexcept { return a_; }
  std::span<const Complex> b() const noexcept { return b_; }
  Complex a(std::size_t n) const { return a_[n]; }
  Complex b(std::size_t n) const { return b_[n]; }
  Complex kappa() const noexcept { return kappa_; }

  /// w_n = a_n conj(b_n) mu_n, the residue weights of beta.
  ComplexVec beta_weights() const;
  /// nu_n = |b_n|^2 mu_n, the Clark measure sigma_{-1}.
  RealVec nu() const;

  RankOneData with_kappa(Complex kappa) const;

 private:
  DiscreteSpectralData base_;
  ComplexVec a_;
  ComplexVec b_;
  Complex kappa_;
};

/// Rank-n data: a, b are N x n, kappa is n x n. Immutable.
class RankNData {
 public:
  /// Throws Error(InvalidData) on shape mismatch or when a or b has
  /// numerical rank below n.
  RankNData(DiscreteSpectralData base, Eigen::MatrixXcd a, Eigen::MatrixXcd b,
            Eigen::MatrixXcd kappa);

  const DiscreteSpectralData& base() const noexcept { return base_; }
  std::size_t size() const noexcept { return base_.size(); }
  Eigen::Index rank() const noexcept { return a_.cols(); }
  const Eigen::MatrixXcd& a() const noexcept { return a_; }
  const Eigen::MatrixXcd& b() const noexcept { return b_; }
  const Eigen::MatrixXcd& kappa() const noexcept { return kappa_; }

  static RankNData from_rank_one(const RankOneData& d);

 private:
  DiscreteSpectralData base_;
  Eigen::MatrixXcd a_;
  Eigen::MatrixXcd b_;
  Eigen::MatrixXcd kappa_;
};

inline constexpr double kAdmissibilityRelTol = 1e-12;
inline constexpr double kNumericalRankRelTol = 1e-10;
inline constexpr double kRealTypeTol = 1e-12;

struct AdmissibilityReport {
  bool condition_A = false;
  bool condition_A_star = false;
  bool real_type = false;
  Complex omega{};             ///< sum_n a_n conj(b_n) mu_n / t_n
  Complex kappa_minus_omega{};
  double tolerance = 0.0;      ///< equality threshold actually used
  double abs_term_sum = 0.0;   ///< sum_n |a_n b_n| mu_n / |t_n|
};

struct AdmissibilityReportN {
  bool condition_A = false;
  bool condition_A_star = false;
  Eigen::MatrixXcd omega;              ///< omega_{jk} = sum a_{nj} conj(b_{nk}) mu_n / t_n
  Eigen::MatrixXcd kappa_minus_omega;  ///< kappa - b^* A^{-1} a = kappa - omega^T
  double sigma_min = 0.0;              ///< smallest singular value of kappa - omega^T
  double sigma_min_star = 0.0;         ///< same for the adjoint condition
  double tolerance = 0.0;
};

AdmissibilityReport validate(const RankOneData& data);
AdmissibilityReportN validate(const RankNData& data);

bool classify_real_type(const RankOneData& data);

/// sum_n a_n conj(b_n) mu_n / t_n, compensated and in |t| ascending order.
Complex omega(const RankOneData& data);
Eigen::MatrixXcd omega_matrix(const RankNData& data);

struct GeneralizedWeakReport {
  double abs_sum = 0.0;
  Complex signed_sum{};
  bool satisfies = false;
  /// Partial sums of |a_n b_n| mu_n / |t_n| in index order.
  RealVec abs_partial_sums;
};

GeneralizedWeakReport generalized_weak_report(const RankOneData& data);

/// (b, a, conj(kappa)) on the same base.
RankOneData adjoint(const RankOneData& data);
RankNData adjoint(const RankNData& data);

}  // namespace splab::data
