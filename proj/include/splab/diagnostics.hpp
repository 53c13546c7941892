#pragma once
// Completeness and synthesis hypothesis checks on finite data. None of these
// decide an infinite-dimensional statement; they report finite evidence.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "splab/engine.hpp"
#include "splab/herglotz.hpp"

namespace splab::diag {

struct GrowthProfile {
  RealVec y;
  RealVec phi_abs;
  RealVec beta_abs;
  RealVec phi_tilde_abs;
  double fitted_exponent = 0.0;  ///< least squares slope of log|phi(iy)| on the top decade
  int exact_exponent = 0;        ///< phi(iy) ~ C y^exact_exponent, from the expansion at infinity
  double envelope_c = 0.0;       ///< min over the grid (y >= y_envelope) of y |phi(iy)|
  /// Running minimum min_{y_envelope <= y' <= Y} y'|phi(iy')| for every grid Y in the top decade.
  RealVec envelope_running;
  /// (max - min) / max of envelope_running.
  double envelope_spread = 0.0;
};

/// Samples y in [y_min, y_max] log-spaced; the envelope uses y >= y_envelope.
GrowthProfile growth_profile(const model::ModelPair& model, double y_max, std::size_t n_points,
                             double y_min = 1.0, double y_envelope = 10.0);

struct IntegralReport {
  double value = 0.0;
  double tail_bound = 0.0;
  double error = 0.0;
  double radius = 0.0;
};

/// int dt / (|phi(t + i eta)|^tau (1 + |t|)^N). Throws
/// Error(DivergentNearRealZero) when eta = 0 and phi has a real zero.
IntegralReport integral_test(const model::ModelPair& model, double n_power, double tau, double eta);

struct MacaevReport {
  Eigen::MatrixXcd singular_matrix;   ///< kappa - omega^T
  double singular_sigma_min = 0.0;
  bool singular_invertible = false;
  std::optional<Eigen::MatrixXcd> bounded_matrix;  ///< I + omega of the bounded picture
  double bounded_sigma_min = 0.0;
  bool bounded_invertible = false;
};

MacaevReport macaev_check(const data::RankNData& data);

struct MassReport {
  RealVec y;
  RealVec scaled;             ///< y |zeta - Theta(iy)| / 2
  double limit = 0.0;         ///< stabilized value of `scaled` (inf without mass)
  double p_est = 0.0;         ///< 1 / limit when has_mass
  bool has_mass = false;
};

MassReport mass_detect(const model::ModelPair& model, Complex zeta);

struct SynthesisDefect {
  std::vector<bool> in_j2;    ///< true: column is the biorthogonal g_j
  double sigma_min = 0.0;
  double gram_condition = 0.0;
};

/// Throws Error(NotBiorthogonal) when <x_j, y_k>_mu differs from the identity.
SynthesisDefect synthesis_defect(const engine::Eigensystem& sys, const std::vector<bool>& in_j2);

struct PartitionSweep {
  SynthesisDefect worst;
  double best_sigma_min = 0.0;
  std::size_t evaluated = 0;
  bool exhaustive = false;
};

/// Exhaustive for N <= 12, otherwise `budget` partitions drawn from a
/// counter-based stream keyed by `seed`.
PartitionSweep enumerate_partitions(const engine::Eigensystem& sys, std::size_t budget = 10000,
                                    std::uint64_t seed = 0);

struct Rectangle {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
};

struct WindowCount {
  long count = 0;
  double winding = 0.0;              ///< raw winding number (real part)
  double distance_to_integer = 0.0;
  std::size_t panels_per_edge = 0;
  double min_abs_phi = 0.0;          ///< on the final contour
  Rectangle contour;                 ///< after any nudging
  long poles_inside = 0;             ///< phi has none in the closed upper half-plane
};

/// Zeros of phi inside the rectangle by the argument principle. Throws
/// Error(ContourTooClose) when no nudged contour gives a clean winding number.
WindowCount volterra_window_check(const model::ModelPair& model, Rectangle rect);

/// Winding of an arbitrary log-derivative around a rectangle (used by the
/// gallery with other functions).
struct Winding {
  Complex value{};
  std::size_t panels_per_edge = 0;
  bool converged = false;
};
Winding winding_number(const std::function<Complex(Complex)>& log_derivative, Rectangle rect,
                       std::size_t max_panels = 4096);

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace splab::diag
