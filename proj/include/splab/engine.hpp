#pragma once
// Matrix realization of L(A, a, b, kappa), its dense spectrum, and the model
// spectrum computed as zeros of phi.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "splab/herglotz.hpp"
#include "splab/spectral_data.hpp"

namespace splab::engine {

enum class Route { Auto, Direct, Shift };

struct MatrixRealization {
  Eigen::MatrixXcd L;
  Route route = Route::Direct;
  double shift = 0.0;            ///< lambda_shift when route == Shift
  Eigen::VectorXd mu;            ///< metric weights
  /// ||L * Linv - I|| / (1 + ||L|| ||Linv||) for the inverse actually formed
  double inverse_residual = 0.0;
};

struct BuildOptions {
  Route route = Route::Auto;
};

/// Throws Error(Admissibility) when condition (A) fails and
/// Error(NoInvertibleShift) when no grid shift makes kappa(lambda) invertible.
MatrixRealization build_matrix(const data::RankNData& data, BuildOptions opts = {});
MatrixRealization build_matrix(const data::RankOneData& data, BuildOptions opts = {});

/// A^{-1} - A^{-1} a kappa^{-1} b^* A^{-1}, with b^* y = b^H M y.
Eigen::MatrixXcd inverse_realization(const data::RankNData& data);

/// kappa(lambda) = kappa + lambda b^* (A - lambda)^{-1} A^{-1} a
Eigen::MatrixXcd shifted_kappa(const data::RankNData& data, double lambda);

/// Data (A - lambda, a, b, kappa(lambda)) realizing L - lambda.
data::RankNData shifted_data(const data::RankNData& data, double lambda);

/// Weighted adjoint M^{-1} L^H M.
Eigen::MatrixXcd weighted_adjoint(const Eigen::MatrixXcd& L, const Eigen::VectorXd& mu);

inline constexpr double kClusterRelTol = 1e-6;
inline constexpr double kJordanRankRelTol = 1e-7;

struct EigenCluster {
  Complex value{};
  std::size_t multiplicity = 1;
  std::vector<std::size_t> jordan_blocks;  ///< sizes, descending
};

struct OracleSpectrum {
  ComplexVec eigenvalues;             ///< with multiplicity
  std::vector<EigenCluster> clusters;
  double scale = 1.0;                 ///< max(1, spectral radius)
};

/// Dense eigensolve with clustering and Jordan structure from rank sequences.
OracleSpectrum oracle_spectrum(const Eigen::MatrixXcd& L);

/// Groups values within kClusterRelTol * scale of each other.
std::vector<EigenCluster> cluster(const ComplexVec& values, double scale);

struct ModelZeros {
  ComplexVec zeros;        ///< the spectrum set, with multiplicity
  ComplexVec raw_phi;      ///< all roots of the phi numerator
  ComplexVec raw_phi_tilde;
  std::vector<EigenCluster> clusters;
};

/// Zeros of phi in the closed upper half-plane together with conjugates of
/// zeros of phi~ in the open upper half-plane. Throws Error(DegreeOverflow)
/// beyond kMaxRationalDegree atoms.
ModelZeros phi_zeros(const model::ModelPair& model);

/// Optimal assignment (Hungarian) between two equally sized multisets.
std::vector<std::size_t> hungarian(const Eigen::MatrixXd& cost);

struct Match {
  double matched_max = 0.0;  ///< max |x_i - y_sigma(i)| over the optimal assignment
  double hausdorff = 0.0;
  std::vector<std::size_t> assignment;
};

Match match(const ComplexVec& x, const ComplexVec& y);
double hausdorff(const ComplexVec& x, const ComplexVec& y);

struct SpectrumResult {
  OracleSpectrum oracle;
  ModelZeros model;
  Match match;
  MatrixRealization realization;
  double tolerance = 0.0;  ///< tol * scale actually applied
  bool matches = false;
};

SpectrumResult compare_spectra(const data::RankOneData& data, BuildOptions opts = {},
                               double tol = 1e-7);

struct Eigensystem {
  ComplexVec eigenvalues;
  Eigen::MatrixXcd x;       ///< matrix eigenvectors (columns, unit mu-norm)
  Eigen::MatrixXcd y;       ///< mu-biorthogonal system: <x_j, y_k>_mu = delta_jk
  Eigen::MatrixXcd h;       ///< h_lambda(t_n) samples (row n, column j)
  Eigen::MatrixXcd g;       ///< kernel samples k_lambda(t_n) or k~_conj(lambda)(t_n)
  Eigen::MatrixXcd gram;    ///< pi sum h_j conj(g_k) nu
  Eigen::VectorXd mu;
  double offdiag_leakage = 0.0;   ///< max |gram_jk| / (||h_j|| ||g_k||), j != k
  double min_collinearity = 1.0;  ///< min_j |<W x_j, h_j>| / (||W x_j|| ||h_j||)
};

/// Throws Error(ChainRequired) when some eigenvalue is multiple.
Eigensystem eigensystem(const data::RankOneData& data, const model::ModelPair& model);

struct ChainReport {
  std::size_t order = 0;           ///< detected order of the zero at lambda
  RealVec chain_residuals;         ///< per l = 1..k: max |(z - lambda) f_l - f_{l-1}| / max|f_{l-1}|
  RealVec remainders;              ///< per l: relative remainder of phi numerator / (z - lambda)^l
};

/// Throws Error(OrderTooHigh) when lambda is a zero of order < k.
ChainReport root_chain(const model::ModelPair& model, Complex lambda, std::size_t k);

struct AdjointReport {
  double matrix_residual = 0.0;    ///< ||L(adjoint data) - L^#|| / ||L||
  double spectrum_residual = 0.0;  ///< matched distance eig(L') vs conj(eig(L))
  bool conjugate_symmetric = false;
};

/// Throws Error(Admissibility) when condition (A*) fails.
AdjointReport adjoint_check(const data::RankNData& data);

/// ||L(A, a t1^{-1}, b t2, t2^H kappa t1^{-1}) - L(A, a, b, kappa)|| / ||L||.
/// Throws Error(SingularGauge) for (numerically) singular gauges.
double gauge_check(const data::RankNData& data, const Eigen::MatrixXcd& tau1,
                   const Eigen::MatrixXcd& tau2);
data::RankNData gauge_transform(const data::RankNData& data, const Eigen::MatrixXcd& tau1,
                                const Eigen::MatrixXcd& tau2);

struct GeneratingFunction {
  Complex lambda0{};
  ComplexVec coeffs;        ///< g = sum c_n (1 + Theta(z)) / (z - t_n)
  double vanish_residual = 0.0;
  double condition = 0.0;   ///< sigma_1 / sigma_{N-1} of the interpolation system
  const model::ModelPair* model = nullptr;

  /// phi_Lambda(z) = (z - lambda0) g(z)
  Complex operator()(Complex z) const;
};

/// Throws Error(NotMinimal) when the interpolation system is rank deficient.
GeneratingFunction generating_function(const model::ModelPair& model, const ComplexVec& lambda);

struct RandomSpec {
  std::size_t n = 4;
  bool real_type = false;
};

/// Random admissible instance: t in +-[0.5, 20] with gaps >= 0.05, mu in
/// [0.1, 10], a and b in the unit disc with |b| >= 0.1, |kappa - omega| and
/// |kappa| bounded away from zero.
data::RankOneData random_instance(std::mt19937_64& rng, RandomSpec spec);

/// Real-type 3-atom data whose phi has a double real zero; returns the data
/// and the location of the double zero.
std::pair<data::RankOneData, double> double_zero_instance();

}  // namespace splab::engine
