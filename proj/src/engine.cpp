#include "splab/engine.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace splab::engine {

namespace {

double sigma_min(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().minCoeff();
}

double sigma_max(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().maxCoeff();
}

Eigen::VectorXd weights(const data::DiscreteSpectralData& base) {
  Eigen::VectorXd mu(static_cast<Eigen::Index>(base.size()));
  for (std::size_t n = 0; n < base.size(); ++n) mu(static_cast<Eigen::Index>(n)) = base.mu(n);
  return mu;
}

bool invertible(const Eigen::MatrixXcd& k) {
  return sigma_min(k) > 1e-8 * std::max(1.0, sigma_max(k));
}

Eigen::MatrixXcd invert_checked(const Eigen::MatrixXcd& m, double& residual) {
  const Eigen::Index n = m.rows();
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
  if (!lu.isInvertible()) {
    throw Error(ErrorKind::Admissibility, "inverse realization is singular");
  }
  Eigen::MatrixXcd inv = lu.inverse();
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);
  residual = (inv * m - eye).norm() / std::sqrt(static_cast<double>(n));
  return inv;
}

}  // namespace

Eigen::MatrixXcd inverse_realization(const data::RankNData& data) {
  const auto& base = data.base();
  const auto n = static_cast<Eigen::Index>(base.size());
  Eigen::VectorXcd tinv(n);
  for (Eigen::Index i = 0; i < n; ++i) tinv(i) = 1.0 / base.t(static_cast<std::size_t>(i));
  const Eigen::VectorXd mu = weights(base);
  const Eigen::MatrixXcd ainv_a = tinv.asDiagonal() * data.a();
  // b^* A^{-1} as an n x N matrix: (b^H M A^{-1})
  const Eigen::MatrixXcd row =
      data.b().adjoint() * (mu.cast<Complex>().cwiseProduct(tinv)).asDiagonal();
  const Eigen::MatrixXcd k_row = data.kappa().fullPivLu().solve(row);
  Eigen::MatrixXcd out = -ainv_a * k_row;
  out.diagonal() += tinv;
  return out;
}

Eigen::MatrixXcd shifted_kappa(const data::RankNData& data, double lambda) {
  const auto& base = data.base();
  const auto n = static_cast<Eigen::Index>(base.size());
  Eigen::VectorXcd d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = base.t(static_cast<std::size_t>(i));
    d(i) = base.mu(static_cast<std::size_t>(i)) / ((t - lambda) * t);
  }
  return data.kappa() + lambda * (data.b().adjoint() * d.asDiagonal() * data.a());
}

data::RankNData shifted_data(const data::RankNData& data, double lambda) {
  return data::RankNData(data.base().shifted(lambda), data.a(), data.b(),
                         shifted_kappa(data, lambda));
}

Eigen::MatrixXcd weighted_adjoint(const Eigen::MatrixXcd& L, const Eigen::VectorXd& mu) {
  const Eigen::VectorXcd m = mu.cast<Complex>();
  const Eigen::VectorXcd minv = mu.cwiseInverse().cast<Complex>();
  return minv.asDiagonal() * L.adjoint() * m.asDiagonal();
}

MatrixRealization build_matrix(const data::RankNData& data, BuildOptions opts) {
  const auto report = data::validate(data);
  if (!report.condition_A) {
    std::ostringstream os;
    os << "condition (A) fails: smallest singular value of kappa - omega^T is "
       << report.sigma_min;
    throw Error(ErrorKind::Admissibility, os.str());
  }
  MatrixRealization out;
  out.mu = weights(data.base());
  const bool direct_ok = invertible(data.kappa());
  Route route = opts.route;
  if (route == Route::Auto) route = direct_ok ? Route::Direct : Route::Shift;
  if (route == Route::Direct && !direct_ok) {
    throw Error(ErrorKind::BadParameters, "direct route requires an invertible kappa");
  }
  out.route = route;
  if (route == Route::Direct) {
    out.L = invert_checked(inverse_realization(data), out.inverse_residual);
    return out;
  }

  // Deterministic scan of 1000 grid points in [-2T, 2T]. Among the admissible
  // candidates prefer points far from the atoms with well-conditioned kappa(lambda).
  const auto t = data.base().t();
  const double T = data.base().scale();
  double best_score = -1.0;
  double best = 0.0;
  for (int j = 0; j < 1000; ++j) {
    const double lambda = -2.0 * T + 4.0 * T * (j + 0.5) / 1000.0;
    double dist = std::numeric_limits<double>::infinity();
    for (double x : t) dist = std::min(dist, std::abs(x - lambda));
    if (dist <= 1e-9 * T) continue;
    const Eigen::MatrixXcd k = shifted_kappa(data, lambda);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(k);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (!(smin > 1e-8)) continue;
    const double score = dist * std::min(1.0, smin / (1e-2 * smax));
    if (score > best_score) {
      best_score = score;
      best = lambda;
    }
  }
  if (best_score < 0.0) {
    throw Error(ErrorKind::NoInvertibleShift, "no grid shift makes kappa(lambda) invertible");
  }
  out.shift = best;
  const data::RankNData sd = shifted_data(data, best);
  out.L = invert_checked(inverse_realization(sd), out.inverse_residual);
  out.L.diagonal().array() += best;
  return out;
}

MatrixRealization build_matrix(const data::RankOneData& data, BuildOptions opts) {
  return build_matrix(data::RankNData::from_rank_one(data), opts);
}

// ---------------------------------------------------------------------------

std::vector<EigenCluster> cluster(const ComplexVec& values, double scale) {
  const std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  const double tol = kClusterRelTol * scale;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(values[i] - values[j]) <= tol) parent[find(i)] = find(j);

  std::vector<EigenCluster> out;
  std::vector<std::size_t> slot(n, n);
  std::vector<Complex> sums;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] == n) {
      slot[r] = out.size();
      out.push_back({Complex{}, 0, {}});
      sums.push_back(0.0);
    }
    out[slot[r]].multiplicity += 1;
    sums[slot[r]] += values[i];
  }
  for (std::size_t c = 0; c < out.size(); ++c)
    out[c].value = sums[c] / static_cast<double>(out[c].multiplicity);
  std::sort(out.begin(), out.end(), [](const EigenCluster& a, const EigenCluster& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return out;
}

namespace {

std::size_t numerical_rank(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  return static_cast<std::size_t>((s.array() > kJordanRankRelTol * s(0)).count());
}

}  // namespace

OracleSpectrum oracle_spectrum(const Eigen::MatrixXcd& L) {
  if (L.rows() > 2048) throw Error(ErrorKind::BadParameters, "oracle limited to N <= 2048");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(L, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::EigensolveFailure, "dense eigensolve did not converge");
  }
  OracleSpectrum out;
  const auto n = L.rows();
  out.eigenvalues.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    out.scale = std::max(out.scale, std::abs(es.eigenvalues()(i)));
  }
  out.clusters = cluster(out.eigenvalues, out.scale);
  for (auto& c : out.clusters) {
    if (c.multiplicity == 1) {
      c.jordan_blocks = {1};
      continue;
    }
    // r_k = rank (L - lambda)^k; blocks of size >= k number r_{k-1} - r_k.
    const Eigen::MatrixXcd B = L - c.value * Eigen::MatrixXcd::Identity(n, n);
    std::vector<std::size_t> r{static_cast<std::size_t>(n)};
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(n, n);
    for (std::size_t k = 1; k <= c.multiplicity + 1; ++k) {
      P = P * B;
      r.push_back(numerical_rank(P));
    }
    std::vector<std::size_t> at_least(r.size(), 0);
    for (std::size_t k = 1; k < r.size(); ++k) at_least[k] = r[k - 1] > r[k] ? r[k - 1] - r[k] : 0;
    for (std::size_t k = r.size() - 1; k >= 1; --k) {
      const std::size_t next = k + 1 < r.size() ? at_least[k + 1] : 0;
      const std::size_t exact = at_least[k] > next ? at_least[k] - next : 0;
      for (std::size_t m = 0; m < exact; ++m) c.jordan_blocks.push_back(k);
    }
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

// ---------------------------------------------------------------------------

ModelZeros phi_zeros(const model::ModelPair& model) {
  const auto& rf = model.rational();
  const auto& beta = model.beta();
  auto newton_beta = [&](Complex z) -> std::pair<Complex, Complex> {
    try {
      return {beta(z), beta.derivative(z)};
    } catch (const Error&) {
      return {0.0, 0.0};
    }
  };
  auto newton_beta_conj = [&](Complex z) -> std::pair<Complex, Complex> {
    const auto [f, d] = newton_beta(std::conj(z));
    return {std::conj(f), std::conj(d)};
  };
  poly::RootOptions o1;
  o1.newton = newton_beta;
  poly::RootOptions o2;
  o2.newton = newton_beta_conj;

  ModelZeros out;
  out.raw_phi = poly::roots(rf.phi_numerator(), o1);
  out.raw_phi_tilde = poly::roots(rf.phi_tilde_numerator(), o2);

  double scale = 1.0;
  for (Complex z : out.raw_phi) scale = std::max(scale, std::abs(z));
  const double tau = 1e-8 * scale;
  for (Complex z : out.raw_phi)
    if (z.imag() >= -tau) out.zeros.push_back(z);
  for (Complex z : out.raw_phi_tilde)
    if (z.imag() > tau) out.zeros.push_back(std::conj(z));
  if (out.zeros.size() != out.raw_phi.size()) out.zeros = out.raw_phi;
  std::sort(out.zeros.begin(), out.zeros.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  out.clusters = cluster(out.zeros, scale);
  return out;
}

std::vector<std::size_t> hungarian(const Eigen::MatrixXd& cost) {
  // Shortest augmenting path with potentials; rows assigned to columns.
  const auto n = static_cast<std::size_t>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assign(n);
  for (std::size_t j = 1; j <= n; ++j) assign[p[j] - 1] = j - 1;
  return assign;
}

double hausdorff(const ComplexVec& x, const ComplexVec& y) {
  if (x.empty() || y.empty()) return x.empty() && y.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  auto directed = [](const ComplexVec& a, const ComplexVec& b) {
    double h = 0.0;
    for (Complex p : a) {
      double d = std::numeric_limits<double>::infinity();
      for (Complex q : b) d = std::min(d, std::abs(p - q));
      h = std::max(h, d);
    }
    return h;
  };
  return std::max(directed(x, y), directed(y, x));
}

Match match(const ComplexVec& x, const ComplexVec& y) {
  Match m;
  m.hausdorff = hausdorff(x, y);
  if (x.size() != y.size()) {
    m.matched_max = std::numeric_limits<double>::infinity();
    return m;
  }
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd cost(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      cost(i, j) = std::abs(x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(j)]);
  m.assignment = hungarian(cost);
  for (std::size_t i = 0; i < x.size(); ++i)
    m.matched_max = std::max(m.matched_max, std::abs(x[i] - y[m.assignment[i]]));
  return m;
}

SpectrumResult compare_spectra(const data::RankOneData& data, BuildOptions opts, double tol) {
  SpectrumResult r;
  r.realization = build_matrix(data, opts);
  r.oracle = oracle_spectrum(r.realization.L);
  const model::ModelPair model(data);
  r.model = phi_zeros(model);
  r.match = match(r.oracle.eigenvalues, r.model.zeros);
  r.tolerance = tol * r.oracle.scale;
  r.matches = r.match.matched_max <= r.tolerance;
  return r;
}

// ---------------------------------------------------------------------------

Eigensystem eigensystem(const data::RankOneData& data, const model::ModelPair& model) {
  const MatrixRealization real = build_matrix(data);
  const auto n = real.L.rows();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(real.L, true);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::EigensolveFailure, "eigensolve failed");

  Eigensystem out;
  out.mu = real.mu;
  double scale = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(es.eigenvalues()(i)));
  ComplexVec ev(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  for (const auto& c : cluster(ev, scale)) {
    if (c.multiplicity > 1) {
      std::ostringstream os;
      os << "eigenvalue (" << c.value.real() << ", " << c.value.imag() << ") has multiplicity "
         << c.multiplicity << "; use root_chain";
      throw Error(ErrorKind::ChainRequired, os.str());
    }
  }
  out.eigenvalues = ev;
  const Eigen::VectorXcd mu = real.mu.cast<Complex>();
  out.x = es.eigenvectors();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double nrm = std::sqrt((out.x.col(j).cwiseAbs2().cwiseProduct(real.mu)).sum());
    out.x.col(j) /= nrm;
  }
  out.y = mu.cwiseInverse().asDiagonal() * out.x.inverse().adjoint();

  const auto t = model.atoms();
  const auto nu = model.nu();
  out.h.resize(n, n);
  out.g.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex lam = ev[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < n; ++i) {
      const double tn = t[static_cast<std::size_t>(i)];
      out.h(i, j) = model.phi(Complex(tn)) / (tn - lam);
      out.g(i, j) = lam.imag() >= 0.0 ? model::kernel_k(model, lam, Complex(tn))
                                      : model::kernel_k_tilde(model, std::conj(lam), Complex(tn));
    }
  }
  Eigen::VectorXcd pnu(n);
  for (Eigen::Index i = 0; i < n; ++i) pnu(i) = kPi * nu[static_cast<std::size_t>(i)];
  out.gram = out.h.transpose() * pnu.asDiagonal() * out.g.conjugate();
  auto nrm = [&](const Eigen::VectorXcd& v) {
    return std::sqrt((v.cwiseAbs2().cwiseProduct(pnu.real())).sum());
  };
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      if (j != k)
        out.offdiag_leakage = std::max(out.offdiag_leakage,
                                       std::abs(out.gram(j, k)) / (nrm(out.h.col(j)) * nrm(out.g.col(k))));

  // W x = i x / b maps L^2(mu) isometrically onto L^2(nu).
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXcd wx(n);
    for (Eigen::Index i = 0; i < n; ++i) wx(i) = kI * out.x(i, j) / data.b(static_cast<std::size_t>(i));
    const Complex ip = (wx.array() * out.h.col(j).conjugate().array() * pnu.array()).sum();
    out.min_collinearity = std::min(out.min_collinearity, std::abs(ip) / (nrm(wx) * nrm(out.h.col(j))));
  }
  return out;
}

ChainReport root_chain(const model::ModelPair& model, Complex lambda, std::size_t k) {
  ChainReport out;
  poly::Poly cur = model.rational().phi_numerator();
  bool still_zero = true;
  for (std::size_t l = 1; l <= k; ++l) {
    double scale = 0.0;
    double pw = 1.0;
    for (std::size_t j = 0; j < cur.size(); ++j) {
      scale += std::abs(cur[j]) * pw;
      pw *= std::abs(lambda);
    }
    const Complex r = cur(lambda);
    const double rel = scale > 0.0 ? std::abs(r) / scale : 0.0;
    out.remainders.push_back(rel);
    if (still_zero && rel <= 1e-6) {
      out.order = l;
    } else {
      still_zero = false;
    }
    cur = poly::divide(cur, poly::Poly(ComplexVec{-lambda, 1.0})).quotient;
  }
  if (out.order < k) {
    std::ostringstream os;
    os << "lambda is a zero of order " << out.order << " < " << k;
    throw Error(ErrorKind::OrderTooHigh, os.str());
  }
  // (z - lambda) f_l = f_{l-1} with f_l = phi / (z - lambda)^l, sampled on a circle.
  double dist = std::numeric_limits<double>::infinity();
  for (double t : model.atoms()) dist = std::min(dist, std::abs(t - lambda));
  const double radius = 0.25 * std::min(dist, 1.0);
  for (std::size_t l = 1; l <= k; ++l) {
    double res = 0.0, ref = 0.0;
    for (int s = 0; s < 16; ++s) {
      const Complex z = lambda + radius * std::polar(1.0, 2.0 * kPi * s / 16.0);
      const Complex f0 = model.phi(z);
      const Complex fl = f0 / std::pow(z - lambda, static_cast<double>(l));
      const Complex fl1 = f0 / std::pow(z - lambda, static_cast<double>(l - 1));
      res = std::max(res, std::abs((z - lambda) * fl - fl1));
      ref = std::max(ref, std::abs(fl1));
    }
    out.chain_residuals.push_back(ref > 0.0 ? res / ref : res);
  }
  return out;
}

AdjointReport adjoint_check(const data::RankNData& data) {
  const auto rep = data::validate(data);
  if (!rep.condition_A_star) throw Error(ErrorKind::Admissibility, "condition (A*) fails");
  const MatrixRealization m = build_matrix(data);
  const MatrixRealization ma = build_matrix(data::adjoint(data));
  AdjointReport out;
  out.matrix_residual = (ma.L - weighted_adjoint(m.L, m.mu)).norm() / m.L.norm();
  const OracleSpectrum s = oracle_spectrum(m.L);
  const OracleSpectrum sa = oracle_spectrum(ma.L);
  ComplexVec conj_s = s.eigenvalues;
  for (auto& z : conj_s) z = std::conj(z);
  out.spectrum_residual = match(sa.eigenvalues, conj_s).matched_max;
  out.conjugate_symmetric = match(s.eigenvalues, conj_s).matched_max <= 1e-9 * s.scale;
  return out;
}

data::RankNData gauge_transform(const data::RankNData& data, const Eigen::MatrixXcd& tau1,
                                const Eigen::MatrixXcd& tau2) {
  const auto n = data.rank();
  if (tau1.rows() != n || tau1.cols() != n || tau2.rows() != n || tau2.cols() != n) {
    throw Error(ErrorKind::BadParameters, "gauge matrices must be n x n");
  }
  for (const auto* tau : {&tau1, &tau2}) {
    if (!(sigma_min(*tau) > 1e-12 * sigma_max(*tau))) {
      throw Error(ErrorKind::SingularGauge, "gauge matrix is singular");
    }
  }
  const Eigen::MatrixXcd t1inv = tau1.inverse();
  return data::RankNData(data.base(), data.a() * t1inv, data.b() * tau2,
                         tau2.adjoint() * data.kappa() * t1inv);
}

double gauge_check(const data::RankNData& data, const Eigen::MatrixXcd& tau1,
                   const Eigen::MatrixXcd& tau2) {
  const data::RankNData g = gauge_transform(data, tau1, tau2);
  const MatrixRealization m = build_matrix(data);
  const MatrixRealization mg = build_matrix(g);
  return (mg.L - m.L).norm() / m.L.norm();
}

// ---------------------------------------------------------------------------

Complex GeneratingFunction::operator()(Complex z) const {
  const auto t = model->atoms();
  const Complex th = model->theta(z);
  Complex s{};
  for (std::size_t n = 0; n < t.size(); ++n) s += coeffs[n] / (z - t[n]);
  return (z - lambda0) * (1.0 + th) * s;
}

GeneratingFunction generating_function(const model::ModelPair& model, const ComplexVec& lambda) {
  const auto t = model.atoms();
  const std::size_t n = t.size();
  if (lambda.size() != n) throw Error(ErrorKind::BadParameters, "|Lambda| must equal dim K_Theta");
  GeneratingFunction out;
  out.model = &model;
  out.lambda0 = lambda[0];
  if (n == 1) {
    out.coeffs = {1.0};
    out.condition = 1.0;
    return out;
  }
  // g = sum c_n (1 + Theta) / (z - t_n) vanishes on Lambda \ {lambda0}.
  Eigen::MatrixXcd sys(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n));
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      sys(static_cast<Eigen::Index>(j - 1), static_cast<Eigen::Index>(k)) = 1.0 / (lambda[j] - t[k]);
    }
    sys.row(static_cast<Eigen::Index>(j - 1)) /= sys.row(static_cast<Eigen::Index>(j - 1)).norm();
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smallest = s(s.size() - 1);
  out.condition = s(0) / smallest;
  if (!(smallest > 1e-12 * s(0))) {
    throw Error(ErrorKind::NotMinimal, "interpolation system is rank deficient");
  }
  const Eigen::VectorXcd c = svd.matrixV().col(static_cast<Eigen::Index>(n - 1));
  out.coeffs.assign(c.data(), c.data() + n);
  double ref = 0.0;
  for (Complex z : lambda) ref = std::max(ref, std::abs(out(z + Complex(0.0, 1.0))));
  for (Complex z : lambda) out.vanish_residual = std::max(out.vanish_residual, std::abs(out(z)));
  if (ref > 0.0) out.vanish_residual /= ref;
  return out;
}

// ---------------------------------------------------------------------------

data::RankOneData random_instance(std::mt19937_64& rng, RandomSpec spec) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const std::size_t n = std::max<std::size_t>(spec.n, 1);
  std::vector<double> t;
  while (t.size() < n) {
    const double mag = 0.5 + 19.5 * u01(rng);
    const double x = u01(rng) < 0.5 ? -mag : mag;
    bool ok = true;
    for (double y : t) ok = ok && std::abs(x - y) >= 0.05;
    if (ok) t.push_back(x);
  }
  std::sort(t.begin(), t.end());
  std::vector<data::Atom> atoms;
  for (double x : t) atoms.push_back({x, 0.1 + 9.9 * u01(rng)});
  data::DiscreteSpectralData base(std::move(atoms));

  ComplexVec a(n), b(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (spec.real_type) {
      a[k] = 2.0 * u01(rng) - 1.0;
      const double mag = 0.1 + 0.9 * u01(rng);
      b[k] = u01(rng) < 0.5 ? -mag : mag;
    } else {
      a[k] = std::polar(std::sqrt(u01(rng)), 2.0 * kPi * u01(rng));
      b[k] = std::polar(0.1 + 0.9 * u01(rng), 2.0 * kPi * u01(rng));
    }
  }
  const data::RankOneData probe(base, a, b, 0.0);
  const Complex om = data::omega(probe);
  Complex kappa;
  while (true) {
    kappa = spec.real_type ? Complex(4.0 * u01(rng) - 2.0)
                           : std::polar(2.0 * std::sqrt(u01(rng)), 2.0 * kPi * u01(rng));
    if (std::abs(kappa - om) >= 0.05 * (1.0 + std::abs(om)) && std::abs(kappa) >= 0.1) break;
  }
  return data::RankOneData(base, a, b, kappa);
}

std::pair<data::RankOneData, double> double_zero_instance() {
  const data::DiscreteSpectralData base({{-1.0, 1.0}, {1.0, 1.0}, {2.0, 1.0}});
  const ComplexVec a{1.0, 1.0, 1.0};
  const ComplexVec b{1.0, -1.0, 1.0};
  const data::RankOneData probe(base, a, b, 0.0);
  const model::CauchyRepresentation f(RealVec{-1.0, 1.0, 2.0}, probe.beta_weights(), 0.0);
  // f' = sum w/(t - x)^2 changes sign on (-1, 1); a critical value there is a double zero of kappa + f.
  auto fp = [&](double x) { return f.derivative(Complex(x)).real(); };
  boost::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(
      fp, -1.0 + 1e-6, 1.0 - 1e-6, boost::math::tools::eps_tolerance<double>(52), iters);
  const double x = 0.5 * (r.first + r.second);
  const double kappa = -f(Complex(x)).real();
  return {data::RankOneData(base, a, b, kappa), x};
}

}  // namespace splab::engine
