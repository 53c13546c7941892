#include "splab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "splab/quadrature.hpp"
#include "splab/summation.hpp"

namespace splab::diag {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

// beta(z) = beta_inf - sum_{k>=1} m_k z^{-k} with m_k = sum w t^{k-1}; the
// first nonvanishing term fixes the decay of phi(iy).
int beta_exponent(const model::CauchyRepresentation& beta) {
  const Complex binf = beta.at_infinity();
  double ref = std::abs(beta.constant());
  for (std::size_t n = 0; n < beta.size(); ++n) ref += std::abs(beta.residues()[n] / beta.poles()[n]);
  if (std::abs(binf) > 1e-10 * ref) return 0;
  const std::size_t n_atoms = beta.size();
  for (std::size_t k = 1; k <= n_atoms; ++k) {
    KahanSum<Complex> m;
    double mref = 0.0;
    for (std::size_t n = 0; n < n_atoms; ++n) {
      const double tp = std::pow(beta.poles()[n], static_cast<double>(k - 1));
      m += beta.residues()[n] * tp;
      mref += std::abs(beta.residues()[n]) * std::abs(tp);
    }
    if (std::abs(m.value()) > 1e-10 * mref) return -static_cast<int>(k);
  }
  return -static_cast<int>(n_atoms + 1);
}

}  // namespace

GrowthProfile growth_profile(const model::ModelPair& model, double y_max, std::size_t n_points,
                             double y_min, double y_envelope) {
  if (n_points < 2 || !(y_max > y_min) || !(y_min > 0.0)) {
    throw Error(ErrorKind::BadParameters, "growth grid needs y_max > y_min > 0 and >= 2 points");
  }
  GrowthProfile g;
  const double l0 = std::log(y_min), l1 = std::log(y_max);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double y = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(n_points - 1));
    const Complex z(0.0, y);
    g.y.push_back(y);
    g.phi_abs.push_back(std::abs(model.phi(z)));
    g.beta_abs.push_back(std::abs(model.beta()(z)));
    g.phi_tilde_abs.push_back(std::abs(model.phi_tilde(z)));
  }
  // Top-decade least squares.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < n_points; ++i) {
    if (g.y[i] < y_max / 10.0 * (1.0 - 1e-12) || !(g.phi_abs[i] > 0.0)) continue;
    const double x = std::log(g.y[i]), v = std::log(g.phi_abs[i]);
    sx += x;
    sy += v;
    sxx += x * x;
    sxy += x * v;
    ++cnt;
  }
  if (cnt >= 2) {
    const double c = static_cast<double>(cnt);
    g.fitted_exponent = (c * sxy - sx * sy) / (c * sxx - sx * sx);
  }
  g.exact_exponent = beta_exponent(model.beta());

  double running = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_points; ++i) {
    if (g.y[i] < y_envelope * (1.0 - 1e-12)) continue;
    running = std::min(running, g.y[i] * g.phi_abs[i]);
    if (g.y[i] >= y_max / 10.0 * (1.0 - 1e-12)) g.envelope_running.push_back(running);
  }
  g.envelope_c = std::isfinite(running) ? running : 0.0;
  if (!g.envelope_running.empty()) {
    const auto [lo, hi] = std::minmax_element(g.envelope_running.begin(), g.envelope_running.end());
    g.envelope_spread = *hi > 0.0 ? (*hi - *lo) / *hi : 0.0;
  }
  return g;
}

IntegralReport integral_test(const model::ModelPair& model, double n_power, double tau, double eta) {
  if (eta < 0.0 || tau < 0.0) throw Error(ErrorKind::BadParameters, "eta and tau must be >= 0");
  if (eta == 0.0 && model.has_rational_form()) {
    for (Complex z : engine::phi_zeros(model).raw_phi) {
      if (std::abs(z.imag()) <= 1e-8 * std::max(1.0, std::abs(z))) {
        std::ostringstream os;
        os << "phi has a real zero at " << z.real() << "; the integrand is not integrable";
        throw Error(ErrorKind::DivergentNearRealZero, os.str());
      }
    }
  }
  auto f = [&](double t) {
    const double a = std::abs(model.phi(Complex(t, eta)));
    return Complex(1.0 / (std::pow(a, tau) * std::pow(1.0 + std::abs(t), n_power)));
  };
  const auto r = quad::integrate_real_line(f, model.atoms(), 1e-10, 1e-8);
  return {r.value.real(), r.tail_bound, r.error, r.radius};
}

MacaevReport macaev_check(const data::RankNData& data) {
  MacaevReport out;
  const Eigen::MatrixXcd om = data::omega_matrix(data);
  const auto n = data.rank();
  out.singular_matrix = data.kappa() - om.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXcd> s1(out.singular_matrix);
  out.singular_sigma_min = s1.singularValues().minCoeff();
  const double tol = data::kAdmissibilityRelTol * (1.0 + data.kappa().norm() + om.norm());
  out.singular_invertible = out.singular_sigma_min > tol;
  Eigen::JacobiSVD<Eigen::MatrixXcd> sk(data.kappa());
  if (sk.singularValues().minCoeff() > 1e-12 * std::max(1.0, sk.singularValues().maxCoeff())) {
    // Bounded picture A^{-1} + a^ b^^* with a^ = -A^{-1} a kappa^{-1}, b^ = A^{-1} b:
    // omega(A^{-1}, a^, b^) = -kappa^{-T} omega.
    const Eigen::MatrixXcd kinvT = data.kappa().inverse().transpose();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n) - kinvT * om;
    Eigen::JacobiSVD<Eigen::MatrixXcd> s2(m);
    out.bounded_sigma_min = s2.singularValues().minCoeff();
    out.bounded_invertible = out.bounded_sigma_min > data::kAdmissibilityRelTol * (1.0 + m.norm());
    out.bounded_matrix = std::move(m);
  }
  return out;
}

MassReport mass_detect(const model::ModelPair& model, Complex zeta) {
  if (std::abs(std::abs(zeta) - 1.0) > 1e-12) throw Error(ErrorKind::BadParameters, "zeta must be unimodular");
  MassReport out;
  const double rinf = model.rho().at_infinity().real();
  const Complex tinf = model.theta_at_infinity();
  const auto t = model.atoms();
  const auto nu = model.nu();
  // zeta - Theta(iy) = (zeta - Theta_inf) + 2i (rho - rho_inf) / ((i + rho_inf)(i + rho)),
  // rho(z) - rho_inf = sum nu / (t - z).
  for (int k = 0; k <= 40; ++k) {
    const double y = std::pow(10.0, 0.25 * k);
    const Complex z(0.0, y);
    KahanSum<Complex> d;
    for (std::size_t n = 0; n < t.size(); ++n) d += nu[n] / (t[n] - z);
    const Complex rho = rinf + d.value();
    const Complex diff = (zeta - tinf) + 2.0 * kI * d.value() / ((kI + rinf) * (kI + rho));
    out.y.push_back(y);
    out.scaled.push_back(y * std::abs(diff) / 2.0);
  }
  out.has_mass = std::abs(zeta - tinf) <= 1e-12;
  if (out.has_mass) {
    KahanSum<double> s;
    for (double v : nu) s += v;
    out.limit = s.value() / (1.0 + rinf * rinf);
    out.p_est = 1.0 / out.limit;
  } else {
    out.limit = std::numeric_limits<double>::infinity();
    out.p_est = 0.0;
  }
  return out;
}

SynthesisDefect synthesis_defect(const engine::Eigensystem& sys, const std::vector<bool>& in_j2) {
  const auto n = sys.x.cols();
  if (static_cast<Eigen::Index>(in_j2.size()) != n) throw Error(ErrorKind::BadParameters, "partition size mismatch");
  const Eigen::VectorXcd mu = sys.mu.cast<Complex>();
  const Eigen::MatrixXcd bi = sys.y.adjoint() * mu.asDiagonal() * sys.x;
  const double dev = (bi - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(dev <= 1e-8)) {
    std::ostringstream os;
    os << "biorthogonal pair deviates from the identity by " << dev;
    throw Error(ErrorKind::NotBiorthogonal, os.str());
  }
  const Eigen::VectorXd root_mu = sys.mu.cwiseSqrt();
  Eigen::MatrixXcd c(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXcd col = in_j2[static_cast<std::size_t>(j)] ? sys.y.col(j) : sys.x.col(j);
    col = root_mu.cast<Complex>().cwiseProduct(col);
    c.col(j) = col / col.norm();
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c);
  SynthesisDefect out;
  out.in_j2 = in_j2;
  out.sigma_min = svd.singularValues().minCoeff();
  out.gram_condition = svd.singularValues().maxCoeff() / out.sigma_min;
  return out;
}

PartitionSweep enumerate_partitions(const engine::Eigensystem& sys, std::size_t budget,
                                    std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(sys.x.cols());
  PartitionSweep out;
  out.exhaustive = n <= 12;
  const std::size_t total = out.exhaustive ? (std::size_t{1} << n) : budget;
  out.worst.sigma_min = std::numeric_limits<double>::infinity();
  std::vector<bool> mask(n);
  for (std::size_t i = 0; i < total; ++i) {
    if (out.exhaustive) {
      for (std::size_t j = 0; j < n; ++j) mask[j] = ((i >> j) & 1U) != 0;
    } else {
      std::uint64_t word = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j % 64 == 0) word = splitmix64(seed ^ splitmix64(i * 1024 + j / 64));
        mask[j] = ((word >> (j % 64)) & 1U) != 0;
      }
    }
    const SynthesisDefect d = synthesis_defect(sys, mask);
    if (d.sigma_min < out.worst.sigma_min) out.worst = d;
    out.best_sigma_min = std::max(out.best_sigma_min, d.sigma_min);
    ++out.evaluated;
  }
  return out;
}

Winding winding_number(const std::function<Complex(Complex)>& log_derivative, Rectangle r,
                       std::size_t max_panels) {
  const quad::Rule& gl = quad::gauss_legendre(64);
  const Complex corners[5] = {{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}, {r.x0, r.y0}};
  auto integrate = [&](std::size_t panels) {
    KahanSum<Complex> total;
    for (int e = 0; e < 4; ++e) {
      const Complex a = corners[e], b = corners[e + 1];
      const Complex step = (b - a) / static_cast<double>(panels);
      for (std::size_t p = 0; p < panels; ++p) {
        const Complex pa = a + step * static_cast<double>(p);
        const Complex mid = pa + 0.5 * step;
        for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
          const Complex z = mid + 0.5 * step * gl.nodes[k];
          total += log_derivative(z) * (0.5 * step * gl.weights[k]);
        }
      }
    }
    return total.value() / (2.0 * kPi * kI);
  };
  Winding w;
  Complex prev = integrate(1);
  for (std::size_t panels = 2; panels <= max_panels; panels *= 2) {
    const Complex cur = integrate(panels);
    w.value = cur;
    w.panels_per_edge = panels;
    const double frac = std::abs(cur.real() - std::round(cur.real()));
    if (std::abs(cur - prev) <= 0.05 && frac <= 0.05 && std::abs(cur.imag()) <= 0.05) {
      w.converged = true;
      return w;
    }
    prev = cur;
  }
  return w;
}

WindowCount volterra_window_check(const model::ModelPair& model, Rectangle rect) {
  if (!(rect.x1 > rect.x0) || !(rect.y1 > rect.y0)) {
    throw Error(ErrorKind::BadParameters, "empty rectangle");
  }
  const double h = 1e-3 * std::min(rect.x1 - rect.x0, rect.y1 - rect.y0);
  const double nudges[] = {0.0, 1.0, -1.0, 2.0, -2.0, 3.0, -3.0, 5.0, -5.0};
  auto logd = [&](Complex z) { return model.phi_log_derivative(z); };
  for (double k : nudges) {
    Rectangle r{rect.x0 - k * h, rect.x1 + k * h, rect.y0 - k * h, rect.y1 + k * h};
    const Winding w = winding_number(logd, r);
    if (!w.converged) continue;
    WindowCount out;
    out.winding = w.value.real();
    out.count = std::lround(w.value.real());
    out.distance_to_integer = std::abs(w.value.real() - static_cast<double>(out.count));
    out.panels_per_edge = w.panels_per_edge;
    out.contour = r;
    out.min_abs_phi = std::numeric_limits<double>::infinity();
    const Complex c[5] = {{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}, {r.x0, r.y0}};
    for (int e = 0; e < 4; ++e)
      for (int s = 0; s < 256; ++s)
        out.min_abs_phi = std::min(out.min_abs_phi, std::abs(model.phi(c[e] + (c[e + 1] - c[e]) * (s / 256.0))));
    return out;
  }
  throw Error(ErrorKind::ContourTooClose, "argument principle did not settle on any nudged contour");
}

}  // namespace splab::diag
