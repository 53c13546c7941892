#pragma once
// Explicit constructions at finite truncation: the zero-free (Volterra)
// example built on cos(pi sqrt z), a lacunary sequence for entire functions of
// slow growth, the incompleteness pipeline (A0, B0, S, gamma, g, d_n, nu_n, E)
// and spectral-gap hypothesis checks.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "splab/diagnostics.hpp"
#include "splab/herglotz.hpp"
#include "splab/spectral_data.hpp"

namespace splab::gallery {

// ---------------------------------------------------------------- sharp

struct SharpInstance {
  std::size_t n = 0;
  double eps = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  data::RankOneData data;
  RealVec c;                  ///< c_n = (2/pi)(-1)^{n+1}(n - 1/2)
  RealVec smooth_a_partial;   ///< partial sums of |a'|^2 |t|^{2 alpha1 - 2} mu
  RealVec smooth_b_partial;   ///< partial sums of |b'|^2 |t|^{2 alpha2 - 2} mu
  /// Terms of both smoothness sums decrease monotonically on the last half of the range.
  bool smooth_tail_monotone = false;
};

/// t_n = (n - 1/2)^2, mu_n = 1, kappa = 1, a'_n = n^{2 - 2 alpha1 - 1/2 - eps},
/// b'_n = c_n / a'_n. Requires alpha1, alpha2 >= 0 and eps = 1 - alpha1 - alpha2 > 0.
SharpInstance sharp_instance(double eps, double alpha1, double alpha2, std::size_t n);

/// The model of a sharp instance uses rho without its free constant (delta = 0).
model::ModelPair sharp_model(const SharpInstance& inst);

/// cos(pi sqrt z) by its even power series (reference for moderate |z|).
Complex cos_pi_sqrt_series(Complex z);
/// cos(pi sqrt z) through the complex cosine; independent of the branch of sqrt.
Complex cos_pi_sqrt(Complex z);

struct MittagLefflerCheck {
  Complex lhs{};
  Complex rhs_partial{};
  double err = 0.0;
  double tail_bound = 0.0;
  bool within_bound = false;
};

/// 1/cos(pi sqrt z) against 1 + sum_{n<=N} (1/(t_n - z) - 1/t_n) c_n.
/// Throws Error(NearPole) when |z - t_n| < 0.25 for some n.
MittagLefflerCheck mittag_leffler_check(Complex z, std::size_t n);

struct ZeroFreeness {
  diag::WindowCount window;
  double min_abs_phi = 0.0;
};

ZeroFreeness sharp_zero_freeness(const SharpInstance& inst, diag::Rectangle rect);

/// max over the grid of |phi_N(z) * 2 Phi_N(z) / (1 + Theta_N(z)) - 1| with
/// Phi_N the partial product of cos(pi sqrt z).
double sharp_identity_discrepancy(const SharpInstance& inst, const ComplexVec& grid);

/// The sharp instance with the sign of c_k flipped (control run).
SharpInstance sharp_flipped(const SharpInstance& inst, std::size_t k);

// ---------------------------------------------------------------- lacunary

struct LacunaryReport {
  RealVec x;
  RealVec witnesses;   ///< a t in (2 x_k, sqrt(x_{k+1})) for each k
  bool inequalities_hold = false;
};

/// x_1 = 2, x_{k+1} = floor(tau^2) + 1 with tau the smallest t > 2 x_k.
/// Generates `count` terms (0: as many as the input allows). Throws
/// Error(ExhaustedInput) when fewer than max(count, 2) terms can be built.
LacunaryReport lacunary_sequence(const RealVec& t_seq, std::size_t count = 0);

// ---------------------------------------------------------------- incompleteness

using Mp50 = boost::multiprecision::cpp_bin_float_50;

template <class Real>
struct ComplexOf {
  using type = std::complex<Real>;
};
template <>
struct ComplexOf<Mp50> {
  using type = boost::multiprecision::cpp_complex_50;
};

struct IncompletenessOptions {
  std::size_t k = 30;                   ///< number of lacunary indices n_k
  RealVec decay_powers{0.0, 1.0, 2.0};  ///< N values of the decay checks
  double residue_tol = 1e-8;
};

struct DecayCheck {
  double power = 0.0;
  bool holds = false;
  std::size_t from = 1;       ///< first 1-based position (k or index rank) of the checked tail
  std::size_t offending = 0;  ///< 1-based index of the first increase (0 when none)
};

template <class Real>
struct IncompletenessPipeline {
  std::vector<Real> t;                ///< constructed range, t[i] <-> index n = i + 1
  std::vector<std::size_t> n1;        ///< 1-based indices n_k
  std::vector<std::size_t> n2;        ///< 1-based indices m_j
  std::vector<Real> v;                ///< per k
  std::vector<Real> s;                ///< zeros of B0, s_k in (t_{n_k}, t_{n_{k+1}})
  std::vector<std::size_t> sparse_k;  ///< 1-based k_j (k_j = 2^j)
  std::vector<Real> p;                ///< per k
  std::vector<Real> q;                ///< per index, 0 on N1
  std::vector<Real> d;                ///< per index
  std::vector<Real> nu;               ///< per index
  Real q_sum{};

  // checks
  std::vector<double> residue_rel_err;  ///< per index
  double max_residue_rel_err = 0.0;
  bool residue_ok = false;
  std::vector<int> sign_changes_per_gap;
  bool one_zero_per_gap = false;
  std::vector<DecayCheck> decay_outside_n1;
  std::vector<DecayCheck> decay_on_n1;
  double partial_fraction_residual = 0.0;  ///< B0/A0, B0/(S A0), B/A identities on a grid
  double weight_identity_residual = 0.0;   ///< max |B(t_n)/A'(t_n) + nu_n| / nu_n
  double sandwich_c1 = 0.0;
  double sandwich_c2 = 0.0;
  bool sandwich_ok = false;
  bool hermite_biehler = false;
  std::vector<double> nu_partial_outside_n2;  ///< log10 of partial sums over n not in N2
  std::vector<double> inv_t_partial_n2;       ///< partial sums of 1/t_{m_j}
  std::vector<std::size_t> v_nudges;          ///< collision nudges applied per k

  bool all_ok() const {
    bool ok = residue_ok && one_zero_per_gap && sandwich_ok && hermite_biehler;
    for (const auto& c : decay_outside_n1) ok = ok && c.holds;
    for (const auto& c : decay_on_n1) ok = ok && c.holds;
    return ok;
  }
};

/// Runs the construction over t_seq (positive, increasing, |t| >= 1). Throws
/// Error(BadParameters) for unusable input, Error(BisectionFailure) when a zero
/// of B0 cannot be bracketed, and Error(DecayViolation) only when `strict`.
template <class Real>
IncompletenessPipeline<Real> incompleteness_build(const std::vector<Real>& t_seq, const IncompletenessOptions& opts,
                                      bool strict = false);

/// t_n = 1.5^n, n = 1..count.
template <class Real>
std::vector<Real> default_incompleteness_spectrum(std::size_t count);

extern template IncompletenessPipeline<double> incompleteness_build<double>(const std::vector<double>&,
                                                                const IncompletenessOptions&, bool);
extern template IncompletenessPipeline<long double> incompleteness_build<long double>(
    const std::vector<long double>&, const IncompletenessOptions&, bool);
extern template IncompletenessPipeline<Mp50> incompleteness_build<Mp50>(const std::vector<Mp50>&,
                                                            const IncompletenessOptions&, bool);
extern template std::vector<double> default_incompleteness_spectrum<double>(std::size_t);
extern template std::vector<long double> default_incompleteness_spectrum<long double>(std::size_t);
extern template std::vector<Mp50> default_incompleteness_spectrum<Mp50>(std::size_t);

struct MaxK {
  std::string precision;
  std::size_t max_k = 0;   ///< largest tested K whose residue check passes
  std::size_t first_failure = 0;
};

/// Largest K in `ks` (ascending) for which the residue check passes, per precision.
std::vector<MaxK> incompleteness_max_k(const std::vector<std::size_t>& ks);

// ---------------------------------------------------------------- gap hypotheses

struct GapReport {
  bool power_gap = false;        ///< |s_n|^N <= C |s_{n+1} - s_n| on the range
  double power_gap_margin = 0.0; ///< min of C |s_{n+1} - s_n| / |s_n|^N
  bool little_o = false;         ///< gap ratio |s_{n+1} - s_n| / |s_n| decreasing toward 0 on the tail
  RealVec gap_ratios;
  bool nu_lower_bound = true;    ///< nu_n >= c (|t_n| + 1)^{-M}, when weights are supplied
  double nu_margin = 0.0;
};

/// Throws Error(BadParameters) when N <= 0 or fewer than 3 points.
GapReport synthesis_gap_check(const RealVec& s_seq, double c, double n_power,
                              const RealVec& nu = {}, const RealVec& t = {}, double nu_c = 0.0,
                              double nu_m = 0.0);

}  // namespace splab::gallery
