// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "splab/diagnostics.hpp"
#include "splab/engine.hpp"
#include "splab/gallery.hpp"
#include "splab/herglotz.hpp"
#include "splab/quadrature.hpp"

using namespace splab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<data::RankOneData> random_instances(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<data::RankOneData> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(engine::random_instance(rng, {1 + i % 12, i % 2 == 0}));
  return out;
}

data::RankNData random_rank_two(std::mt19937_64& rng, std::size_t n) {
  const auto base = engine::random_instance(rng, {n, false}).base();
  std::normal_distribution<double> g;
  auto m = [&](Eigen::Index r, Eigen::Index c) {
    Eigen::MatrixXcd x(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) x(i, j) = {g(rng), g(rng)};
    return x;
  };
  const auto nn = static_cast<Eigen::Index>(n);
  return data::RankNData(base, m(nn, 2), m(nn, 2), m(2, 2));
}

data::RankOneData make(std::vector<data::Atom> atoms, ComplexVec a, ComplexVec b, Complex kappa) {
  return data::RankOneData(data::DiscreteSpectralData(std::move(atoms)), std::move(a), std::move(b), kappa);
}

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  if (!ok) ++failures;
}

template <class F>
void guarded(int id, const std::string& what, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, what, std::string("exception: ") + e.what());
  }
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---------------------------------------------------------------------------

void oracle_equivalence() {
  guarded(1, "oracle equivalence on 400 random instances", [] {
    const auto t0 = Clock::now();
    const auto inst = random_instances(400, 20240601);
    double worst = 0.0;
    bool counts = true;
    for (const auto& d : inst) {
      const auto r = engine::compare_spectra(d);
      if (r.oracle.eigenvalues.size() != r.model.zeros.size()) counts = false;
      worst = std::max(worst, r.match.hausdorff / r.oracle.scale);
    }
    const double secs = seconds_since(t0);
    std::ostringstream os;
    os << "worst hausdorff/scale " << worst << ", " << secs << " s";
    report(1, counts && worst <= 1e-7 && secs < 10.0, "oracle equivalence on 400 random instances", os.str());
  });
}

void anchors() {
  guarded(2, "closed-form anchors", [] {
    const auto one = make({{1.0, 1.0}}, {1.0}, {1.0}, 2.0);
    const auto two = make({{-1.0, 1.0}, {1.0, 1.0}}, {1.0, 1.0}, {1.0, 1.0}, 1.0);
    const auto r1 = engine::compare_spectra(one);
    const auto r2 = engine::compare_spectra(two);
    const ComplexVec want1{2.0};
    const ComplexVec want2{1.0 - std::sqrt(2.0), 1.0 + std::sqrt(2.0)};
    double err = 0.0;
    err = std::max(err, engine::match(r1.oracle.eigenvalues, want1).matched_max);
    err = std::max(err, engine::match(r1.model.zeros, want1).matched_max);
    err = std::max(err, engine::match(r2.oracle.eigenvalues, want2).matched_max);
    err = std::max(err, engine::match(r2.model.zeros, want2).matched_max);
    const bool sizes = r1.oracle.eigenvalues.size() == 1 && r2.oracle.eigenvalues.size() == 2 &&
                       r1.model.zeros.size() == 1 && r2.model.zeros.size() == 2;
    report(2, sizes && err <= 1e-10, "closed-form anchors {2} and {1 +- sqrt 2}", fmt("max error %.3g", err));
  });
}

void inverse_shift_gauge() {
  guarded(3, "inverse, shift and gauge identities", [] {
    const auto inst = random_instances(400, 20240602);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    double inv = 0.0, shift = 0.0, gauge = 0.0;
    for (const auto& d : inst) {
      const auto n = data::RankNData::from_rank_one(d);
      const auto m = engine::build_matrix(n, {engine::Route::Direct});
      const Eigen::MatrixXcd linv = engine::inverse_realization(n);
      const auto sz = m.L.rows();
      const double r = (m.L * linv - Eigen::MatrixXcd::Identity(sz, sz)).norm() /
                       (1.0 + m.L.norm() * linv.norm());
      inv = std::max(inv, r);

      const auto base = engine::oracle_spectrum(m.L);
      const double lambda = 0.37 + 0.1 * g(rng);
      const auto ms = engine::build_matrix(engine::shifted_data(n, lambda), {engine::Route::Direct});
      ComplexVec moved = engine::oracle_spectrum(ms.L).eigenvalues;
      for (auto& z : moved) z += lambda;
      shift = std::max(shift, engine::match(moved, base.eigenvalues).matched_max / base.scale);

      Eigen::MatrixXcd t1(1, 1), t2(1, 1);
      t1(0, 0) = {1.0 + 0.5 * g(rng), 0.5 * g(rng)};
      t2(0, 0) = {0.5 * g(rng), 1.0 + 0.5 * g(rng)};
      gauge = std::max(gauge, engine::gauge_check(n, t1, t2));
    }
    for (int i = 0; i < 50; ++i) {
      const auto n = random_rank_two(rng, 3 + static_cast<std::size_t>(i % 8));
      Eigen::MatrixXcd t1 = Eigen::MatrixXcd::Identity(2, 2), t2 = Eigen::MatrixXcd::Identity(2, 2);
      t1(0, 1) = {0.3 * g(rng), 0.3 * g(rng)};
      t2(1, 0) = {0.3 * g(rng), 0.3 * g(rng)};
      t2(0, 0) = {2.0, 0.5};
      gauge = std::max(gauge, engine::gauge_check(n, t1, t2));
      const auto m = engine::build_matrix(n, {engine::Route::Direct});
      const Eigen::MatrixXcd linv = engine::inverse_realization(n);
      const auto sz = m.L.rows();
      inv = std::max(inv, (m.L * linv - Eigen::MatrixXcd::Identity(sz, sz)).norm() /
                              (1.0 + m.L.norm() * linv.norm()));
    }
    std::ostringstream os;
    os << "inverse " << inv << ", shift " << shift << ", gauge " << gauge;
    report(3, inv <= 1e-10 && shift <= 1e-9 && gauge <= 1e-10, "inverse, shift and gauge identities", os.str());
  });
}

void adjoint_law() {
  guarded(4, "adjoint law", [] {
    const auto inst = random_instances(400, 20240603);
    double worst = 0.0;
    bool symmetric = true;
    for (const auto& d : inst) {
      const auto n = data::RankNData::from_rank_one(d);
      const auto rep = engine::adjoint_check(n);
      const double scale = engine::oracle_spectrum(engine::build_matrix(n).L).scale;
      worst = std::max(worst, rep.spectrum_residual / scale);
      if (data::classify_real_type(d) && !rep.conjugate_symmetric) symmetric = false;
    }
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
      const auto n = random_rank_two(rng, 3 + static_cast<std::size_t>(i % 8));
      const auto rep = engine::adjoint_check(n);
      const double scale = engine::oracle_spectrum(engine::build_matrix(n).L).scale;
      worst = std::max(worst, rep.spectrum_residual / scale);
    }
    std::ostringstream os;
    os << "worst conj mismatch/scale " << worst << ", real-type symmetric " << (symmetric ? "yes" : "no");
    report(4, worst <= 1e-9 && symmetric, "adjoint law", os.str());
  });
}

void model_identities() {
  guarded(5, "model function identities", [] {
    const auto inst = random_instances(400, 20240604);
    double phi_err = 0.0, theta_err = 0.0, coeff_err = 0.0;
    for (const auto& d : inst) {
      const auto m = model::build_model(d);
      const RealVec nu = d.nu();
      for (std::size_t k = 0; k < d.size(); ++k) {
        const double t = d.base().t(k);
        const Complex want = kI * d.a(k) / d.b(k);
        phi_err = std::max(phi_err, std::abs(m.phi(t) - want) / std::abs(want));
        const Complex dth = -2.0 * kI / nu[k];
        theta_err = std::max(theta_err, std::abs(m.theta_derivative(t) - dth) / std::abs(dth));
      }
      if (data::classify_real_type(d)) {
        const auto& rf = m.rational();
        const poly::Poly p = rf.phi_numerator();
        const poly::Poly q = rf.phi_tilde_numerator();
        const double scale = std::max(p.max_abs_coeff(), q.max_abs_coeff());
        for (std::size_t i = 0; i < std::max(p.size(), q.size()); ++i)
          coeff_err = std::max(coeff_err, std::abs(p[i] - q[i]) / scale);
      }
    }
    std::ostringstream os;
    os << "phi(t_n) " << phi_err << ", Theta'(t_n) " << theta_err << ", phi~ vs phi coefficients " << coeff_err;
    report(5, phi_err <= 1e-6 && theta_err <= 1e-6 && coeff_err <= 1e-12, "model function identities", os.str());
  });
}

void clark_consistency() {
  guarded(6, "Clark consistency", [] {
    const auto inst = random_instances(100, 20240605);
    double atom_err = 0.0;
    for (const auto& d : inst) {
      const auto m = model::build_model(d);
      const auto c = model::clark_measure(m, -1.0);
      const RealVec nu = d.nu();
      if (c.atoms.size() != d.size()) {
        atom_err = INFINITY;
        continue;
      }
      for (std::size_t k = 0; k < d.size(); ++k) {
        const double t = d.base().t(k);
        atom_err = std::max(atom_err, std::abs(c.atoms[k] - t) / (1.0 + std::abs(t)));
        atom_err = std::max(atom_err, std::abs(c.weights[k] - nu[k]) / nu[k]);
      }
    }

    // Unitarity and reproducing formula on fixed instances.
    double unitary = 0.0, repr_discrete = 0.0, repr_lebesgue = 0.0;
    const std::vector<data::RankOneData> fixed{
        make({{-1.0, 1.0}, {1.0, 1.0}}, {1.0, 1.0}, {1.0, 1.0}, 1.0),
        make({{-2.0, 0.5}, {0.5, 1.0}, {3.0, 2.0}}, {{1.0, 0.5}, {-0.3, 0.2}, {0.7, -1.0}},
             {{0.8, 0.1}, {1.0, 0.0}, {0.4, 0.6}}, {1.5, -0.5}),
    };
    for (const auto& d : fixed) {
      const auto m = model::build_model(d);
      const auto sigma_m1 = model::clark_measure(m, -1.0);
      const auto sigma = model::clark_measure(m, Complex(0.6, 0.8));
      ComplexVec u(sigma.atoms.size());
      for (std::size_t k = 0; k < u.size(); ++k) u[k] = Complex(1.0 + 0.5 * static_cast<double>(k), -0.3 * static_cast<double>(k));
      const model::ClarkTransform U(sigma, m, u);
      const double leb = U.lebesgue_norm_sq();
      const double disc = U.discrete_norm_sq(sigma_m1);
      unitary = std::max(unitary, std::abs(leb - disc) / disc);

      const Complex lam(0.4, 0.9), mu(-0.2, 1.3);
      auto f = [&](Complex x) { return model::kernel_k(m, mu, x); };
      auto k = [&](Complex x) { return model::kernel_k(m, lam, x); };
      const Complex want = 2.0 * kPi * kI * model::kernel_k(m, mu, lam);
      repr_discrete = std::max(repr_discrete, std::abs(model::clark_inner(m, f, k) - want) / std::abs(want));
      const RealVec bp(m.atoms().begin(), m.atoms().end());
      const auto line = quad::integrate_real_line(
          [&](double x) { return f(x) * std::conj(k(x)); }, bp, 1e-12, 1e-9);
      repr_lebesgue = std::max(repr_lebesgue, std::abs(line.value - want) / std::abs(want));
    }
    std::ostringstream os;
    os << "sigma_-1 atoms/weights " << atom_err << ", unitarity " << unitary << ", reproducing discrete "
       << repr_discrete << " lebesgue " << repr_lebesgue;
    report(6, atom_err <= 1e-9 && unitary <= 1e-5 && repr_discrete <= 1e-9 && repr_lebesgue <= 1e-5,
           "Clark consistency", os.str());
  });
}

void sharp_reproduction() {
  guarded(7, "zero-free example", [] {
    const auto t0 = Clock::now();
    const auto ml = gallery::mittag_leffler_check({-1.0, 0.0}, 1000);
    const double cosh_ref = 1.0 / std::cosh(kPi);
    const bool lhs_ok = std::abs(ml.lhs - cosh_ref) <= 1e-14;
    const auto inst = gallery::sharp_instance(1.0, 0.0, 0.0, 500);
    const auto zf = gallery::sharp_zero_freeness(inst, {0.1, 50.0, 0.0, 10.0});
    const double secs = seconds_since(t0);
    std::ostringstream os;
    os << "ML err " << ml.err << " <= bound " << ml.tail_bound << ", zeros in window " << zf.window.count
       << " (winding " << zf.window.winding << "), " << secs << " s";
    report(7, lhs_ok && ml.err <= 1e-5 && ml.within_bound && zf.window.count == 0 && secs < 60.0,
           "zero-free example", os.str());
  });
}

void envelope() {
  guarded(8, "growth envelope", [] {
    const auto inst = random_instances(50, 20240606);
    double worst_spread = 0.0, min_c = INFINITY;
    for (const auto& d : inst) {
      const auto g = diag::growth_profile(model::build_model(d), 1e4, 400, 1.0, 10.0);
      worst_spread = std::max(worst_spread, g.envelope_spread);
      min_c = std::min(min_c, g.envelope_c);
    }
    // kappa equal to the signed sum with vanishing total weight: y|phi(iy)| decays.
    const auto deg = make({{-2.0, 1.0}, {-1.0, 1.0}, {1.0, 1.0}, {3.0, 1.0}}, {1.0, 2.0, -1.0, -2.0},
                          {1.0, 1.0, 1.0, 1.0}, 0.0);
    const auto deg2 = deg.with_kappa(data::generalized_weak_report(deg).signed_sum);
    model::ModelOptions mo;
    mo.enforce_admissibility = false;
    const auto gd = diag::growth_profile(model::build_model(deg2, mo), 1e4, 400, 1.0, 10.0);
    const double decay = gd.envelope_running.back() / gd.envelope_running.front();
    std::ostringstream os;
    os << "min constant " << min_c << ", worst spread " << worst_spread << ", degenerate family top-decade ratio "
       << decay << " (constant " << gd.envelope_c << ")";
    report(8, min_c > 0.0 && worst_spread <= 0.2 && decay <= 0.2, "growth envelope", os.str());
  });
}

// Smallest eigenvalue of a Hermitian PSD matrix by bisection on the
// leading-principal-minor test, minors by permutation expansion.
Complex leibniz_det(const Eigen::MatrixXcd& m) {
  const auto n = static_cast<int>(m.rows());
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  Complex det{};
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inversions;
    Complex prod{1.0, 0.0};
    for (int i = 0; i < n; ++i) prod *= m(i, perm[static_cast<std::size_t>(i)]);
    det += (inversions % 2 == 0) ? prod : -prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

double brute_sigma_min(const Eigen::MatrixXcd& c) {
  const Eigen::MatrixXcd g = c.adjoint() * c;
  const auto n = g.rows();
  auto positive_definite = [&](double lambda) {
    const Eigen::MatrixXcd s = g - lambda * Eigen::MatrixXcd::Identity(n, n);
    for (Eigen::Index k = 1; k <= n; ++k)
      if (!(leibniz_det(s.topLeftCorner(k, k)).real() > 0.0)) return false;
    return true;
  };
  double lo = 0.0, hi = g.trace().real();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (positive_definite(mid) ? lo : hi) = mid;
  }
  return std::sqrt(0.5 * (lo + hi));
}

void synthesis_oracle() {
  guarded(9, "synthesis defect oracle", [] {
    std::mt19937_64 rng(20240607);
    double worst = 0.0;
    std::size_t checked = 0;
    for (int i = 0; i < 60; ++i) {
      const auto d = engine::random_instance(rng, {2 + static_cast<std::size_t>(i % 5), i % 2 == 0});
      const auto m = model::build_model(d);
      engine::Eigensystem sys;
      try {
        sys = engine::eigensystem(d, m);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::ChainRequired) continue;
        throw;
      }
      const auto n = sys.x.cols();
      for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::vector<bool> part(static_cast<std::size_t>(n));
        for (Eigen::Index j = 0; j < n; ++j) part[static_cast<std::size_t>(j)] = ((mask >> j) & 1U) != 0;
        const auto def = diag::synthesis_defect(sys, part);
        Eigen::MatrixXcd c(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
          Eigen::VectorXcd col = part[static_cast<std::size_t>(j)] ? sys.y.col(j) : sys.x.col(j);
          for (Eigen::Index r = 0; r < n; ++r) col(r) *= std::sqrt(sys.mu(r));
          c.col(j) = col / col.norm();
        }
        worst = std::max(worst, std::abs(def.sigma_min - brute_sigma_min(c)));
        ++checked;
      }
    }
    // Selfadjoint data: a = b real, kappa real.
    double spread = 0.0;
    for (int i = 0; i < 10; ++i) {
      auto d = engine::random_instance(rng, {3 + static_cast<std::size_t>(i % 6), true});
      ComplexVec b(d.b().begin(), d.b().end());
      const auto sa = data::RankOneData(d.base(), b, b, d.kappa().real());
      const auto sys = engine::eigensystem(sa, model::build_model(sa));
      const auto sweep = diag::enumerate_partitions(sys);
      spread = std::max(spread, sweep.best_sigma_min - sweep.worst.sigma_min);
    }
    std::ostringstream os;
    os << checked << " partitions, worst |svd - brute| " << worst << ", selfadjoint partition spread " << spread;
    report(9, checked > 0 && worst <= 1e-10 && spread <= 1e-10, "synthesis defect oracle", os.str());
  });
}

void incompleteness() {
  guarded(10, "incompleteness pipeline", [] {
    gallery::IncompletenessOptions opts;
    opts.k = 30;
    const auto p = gallery::incompleteness_build<gallery::Mp50>(gallery::default_incompleteness_spectrum<gallery::Mp50>(60), opts);
    bool decay = true;
    for (const auto& c : p.decay_outside_n1) decay = decay && c.holds;
    for (const auto& c : p.decay_on_n1) decay = decay && c.holds;
    std::vector<std::size_t> ks;
    for (std::size_t k = 2; k <= 64; ++k) ks.push_back(k);
    const auto mk = gallery::incompleteness_max_k(ks);
    std::ostringstream os;
    os << "K=30 residue " << p.max_residue_rel_err << ", one zero per gap " << (p.one_zero_per_gap ? "yes" : "no")
       << ", decay " << (decay ? "yes" : "no") << "; max K:";
    bool documented = mk.size() == 3;
    for (const auto& m : mk) {
      os << " " << m.precision << "=" << m.max_k;
      documented = documented && m.max_k > 0;
    }
    report(10, p.residue_ok && p.one_zero_per_gap && decay && documented, "incompleteness pipeline", os.str());
  });
}

}  // namespace

int main() {
  oracle_equivalence();
  anchors();
  inverse_shift_gauge();
  adjoint_law();
  model_identities();
  clark_consistency();
  sharp_reproduction();
  envelope();
  synthesis_oracle();
  incompleteness();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
