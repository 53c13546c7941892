#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "splab/gallery.hpp"

namespace splab::gallery {

namespace {

template <class Real>
double to_d(const Real& x) {
  return static_cast<double>(x);
}

template <class Real>
struct Builder {
  const std::vector<Real>& t;     // full constructed range
  const std::vector<std::size_t>& n1;   // 0-based positions
  const std::vector<bool>& in_n1;
  const std::vector<Real>& v;
  std::vector<Real> zeros_s;      // sparse zeros s_{k_j}

  // B0/A0 = sum_k v_k / (t_{n_k} - z)
  template <class Z>
  Z b0_over_a0(const Z& z, std::size_t skip = SIZE_MAX) const {
    Z sum = Z(0);
    for (std::size_t k = 0; k < n1.size(); ++k)
      if (k != skip) sum += Z(v[k]) / (Z(t[n1[k]]) - z);
    return sum;
  }

  template <class Z>
  Z s_poly(const Z& z) const {
    Z prod = Z(1);
    for (const Real& s : zeros_s) prod *= Z(1) - z / Z(s);
    return prod;
  }

  template <class Z>
  Z gamma(const Z& z, const std::vector<Real>& q, std::size_t skip = SIZE_MAX) const {
    Z sum = Z(1);
    for (std::size_t i = 0; i < t.size(); ++i)
      if (!in_n1[i] && i != skip) sum += Z(q[i]) / (Z(t[i]) - z);
    return sum;
  }
};

template <class Real>
bool strictly_decreasing_from(const std::vector<Real>& vals, std::size_t from, std::size_t& bad) {
  for (std::size_t i = from; i + 1 < vals.size(); ++i) {
    if (!(vals[i + 1] < vals[i])) {
      bad = i + 1;
      return false;
    }
  }
  return true;
}

}  // namespace

template <class Real>
std::vector<Real> default_incompleteness_spectrum(std::size_t count) {
  std::vector<Real> t;
  Real x = Real(1);
  for (std::size_t n = 1; n <= count; ++n) {
    x *= Real(3) / Real(2);
    t.push_back(x);
  }
  return t;
}

template <class Real>
IncompletenessPipeline<Real> incompleteness_build(const std::vector<Real>& t_seq, const IncompletenessOptions& opts,
                                      bool strict) {
  using std::abs;
  using std::log10;
  using std::pow;
  using std::sqrt;
  using C = typename ComplexOf<Real>::type;
  const std::size_t K = opts.k;
  if (K < 2 || K > 200) throw Error(ErrorKind::BadParameters, "K must lie in [2, 200]");
  if (t_seq.empty() || t_seq.front() < Real(1))
    throw Error(ErrorKind::BadParameters, "spectrum must start at t >= 1");
  for (std::size_t i = 1; i < t_seq.size(); ++i)
    if (!(t_seq[i] > t_seq[i - 1])) throw Error(ErrorKind::BadParameters, "spectrum must be increasing");

  IncompletenessPipeline<Real> p;

  // Lacunary selection.
  std::vector<std::size_t> n1{0};
  while (n1.size() < K) {
    std::size_t next = n1.back() + 1;
    while (next < t_seq.size() && !(t_seq[next] > 2 * t_seq[n1.back()])) ++next;
    if (next >= t_seq.size()) {
      std::ostringstream os;
      os << "spectrum of length " << t_seq.size() << " yields only " << n1.size()
         << " lacunary indices, need " << K;
      throw Error(ErrorKind::BadParameters, os.str());
    }
    n1.push_back(next);
  }
  const std::size_t range = n1.back() + 1;
  p.t.assign(t_seq.begin(), t_seq.begin() + static_cast<std::ptrdiff_t>(range));
  const auto& t = p.t;
  std::vector<bool> in_n1(range, false);
  for (std::size_t i : n1) {
    in_n1[i] = true;
    p.n1.push_back(i + 1);
  }

  // v_k in (1, 2) with B0(t_n) != 0 off N1.
  p.v.resize(K);
  p.v_nudges.assign(K, 0);
  for (std::size_t k = 0; k < K; ++k) p.v[k] = Real(1.5 + 0.25 * std::sin(static_cast<double>(k + 1)));
  Builder<Real> b{t, n1, in_n1, p.v, {}};
  for (std::size_t i = 0; i < range; ++i) {
    if (in_n1[i]) continue;
    for (int attempt = 0; attempt < 8; ++attempt) {
      Real scale = Real(0);
      for (std::size_t k = 0; k < K; ++k) scale += abs(p.v[k] / (t[n1[k]] - t[i]));
      if (abs(b.b0_over_a0(t[i])) > Real(1e-10) * scale) break;
      std::size_t nearest = 0;
      for (std::size_t k = 1; k < K; ++k)
        if (abs(t[n1[k]] - t[i]) < abs(t[n1[nearest]] - t[i])) nearest = k;
      p.v[nearest] += Real(1e-3);
      ++p.v_nudges[nearest];
    }
  }

  // Zeros of B0, one per lacunary gap.
  auto f = [&](const Real& x) { return b.b0_over_a0(x); };
  p.s.resize(K - 1);
  p.sign_changes_per_gap.resize(K - 1);
  p.one_zero_per_gap = true;
  for (std::size_t k = 0; k + 1 < K; ++k) {
    const Real a = t[n1[k]], c = t[n1[k + 1]];
    const Real width = c - a;
    bool found = false;
    Real lo, hi, flo, fhi;
    for (double delta : {1e-3, 1e-6, 1e-9, 1e-12}) {
      lo = a + Real(delta) * width;
      hi = c - Real(delta) * width;
      flo = f(lo);
      fhi = f(hi);
      if (flo < 0 && fhi > 0) {
        found = true;
        break;
      }
    }
    if (!found) {
      std::ostringstream os;
      os << "no sign change of B0 in gap " << k + 1;
      throw Error(ErrorKind::BisectionFailure, os.str());
    }
    std::uintmax_t iters = 400;
    const auto root = boost::math::tools::toms748_solve(
        f, lo, hi, flo, fhi,
        boost::math::tools::eps_tolerance<Real>(std::numeric_limits<Real>::digits - 3), iters);
    p.s[k] = (root.first + root.second) / 2;

    int changes = 0;
    Real prev = flo;
    for (int j = 1; j <= 64; ++j) {
      const Real x = (j == 64) ? hi : lo + (hi - lo) * Real(j) / Real(64);
      const Real fx = f(x);
      if ((fx > 0) != (prev > 0)) ++changes;
      prev = fx;
    }
    p.sign_changes_per_gap[k] = changes;
    if (changes != 1) p.one_zero_per_gap = false;
  }

  // Sparse zeros k_j = 2^j.
  for (std::size_t kj = 1; kj <= K - 1; kj *= 2) {
    p.sparse_k.push_back(kj);
    b.zeros_s.push_back(p.s[kj - 1]);
  }

  p.p.resize(K);
  for (std::size_t k = 0; k < K; ++k) p.p[k] = p.v[k] / b.s_poly(t[n1[k]]);

  p.q.assign(range, Real(0));
  p.q_sum = Real(0);
  for (std::size_t i = 0; i < range; ++i) {
    if (in_n1[i]) continue;
    Real dist = abs(t[i] - t[n1[0]]);
    for (std::size_t k = 1; k < K; ++k) dist = std::min<Real>(dist, abs(t[i] - t[n1[k]]));
    p.q[i] = pow(2 * t[i], -Real(static_cast<double>(i + 1))) * dist;
    p.q_sum += p.q[i];
  }
  if (!(p.q_sum < Real(1))) throw Error(ErrorKind::BadParameters, "sum of q_n is not below 1");

  p.d.assign(range, Real(0));
  for (std::size_t k = 0; k < K; ++k) {
    Real s = Real(0);
    for (std::size_t i = 0; i < range; ++i)
      if (!in_n1[i]) s += p.q[i] / (t[n1[k]] - t[i]);
    p.d[n1[k]] = -p.p[k] * (1 - s);
  }
  for (std::size_t i = 0; i < range; ++i) {
    if (in_n1[i]) continue;
    Real s = Real(0);
    for (std::size_t k = 0; k < K; ++k) s += p.p[k] / (t[n1[k]] - t[i]);
    p.d[i] = -p.q[i] * s;
  }

  // N2: positions 4, 8, 16, ... among indices outside N1, with deg T <= deg S - 2.
  {
    std::vector<std::size_t> outside;
    for (std::size_t i = 0; i < range; ++i)
      if (!in_n1[i]) outside.push_back(i);
    const std::size_t max_deg = b.zeros_s.size() >= 2 ? b.zeros_s.size() - 2 : 0;
    for (std::size_t pos = 4; pos <= outside.size() && p.n2.size() < max_deg; pos *= 2) {
      const std::size_t i = outside[pos - 1];
      if (!p.n2.empty() && !(t[i] > 2 * t[p.n2.back() - 1])) continue;
      p.n2.push_back(i + 1);
    }
  }
  std::vector<bool> in_n2(range, false);
  for (std::size_t m : p.n2) in_n2[m - 1] = true;

  p.nu.assign(range, Real(0));
  for (std::size_t i = 0; i < range; ++i) {
    if (in_n1[i]) p.nu[i] = p.d[i] * p.d[i];
    else if (in_n2[i]) p.nu[i] = Real(1);
    else p.nu[i] = pow(Real(2), Real(static_cast<double>(i + 1))) * p.d[i] * p.d[i];
  }

  // Residues of g/A: h (g/A)(t_n + h) with the simple pole factor separated.
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real eps_h = pow(eps, Real(0.75));
  p.residue_rel_err.assign(range, std::numeric_limits<double>::infinity());
  p.max_residue_rel_err = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const std::size_t i = n1[k];
    const Real h = eps_h * t[i];
    const Real z = t[i] + h;
    const Real val = (h * b.b0_over_a0(z, k) - p.v[k]) * b.gamma(z, p.q) / b.s_poly(z);
    if (p.d[i] != 0) p.residue_rel_err[i] = to_d(abs(val - p.d[i]) / abs(p.d[i]));
  }
  for (std::size_t i = 0; i < range; ++i) {
    if (in_n1[i]) continue;
    const Real h = eps_h * p.q[i];
    const Real z = t[i] + h;
    const Real val = b.b0_over_a0(z) * (h * b.gamma(z, p.q, i) - p.q[i]) / b.s_poly(z);
    if (p.d[i] != 0) p.residue_rel_err[i] = to_d(abs(val - p.d[i]) / abs(p.d[i]));
  }
  p.residue_ok = true;
  for (double e : p.residue_rel_err) {
    p.max_residue_rel_err = std::max(p.max_residue_rel_err, e);
    if (!(e <= opts.residue_tol)) p.residue_ok = false;
  }

  // Decay of the coefficients.
  for (double power : opts.decay_powers) {
    std::vector<Real> outside_vals, on_vals;
    std::vector<std::size_t> outside_idx;
    for (std::size_t i = 0; i < range; ++i) {
      if (in_n1[i]) continue;
      outside_vals.push_back(pow(Real(2), Real(static_cast<double>(i + 1))) * abs(p.d[i]) *
                             pow(t[i], Real(power)));
      outside_idx.push_back(i + 1);
    }
    for (std::size_t k = 0; k < K; ++k)
      on_vals.push_back(pow(Real(2), Real(static_cast<double>(k + 1))) * abs(p.d[n1[k]]) *
                        pow(t[n1[k]], Real(power)));
    DecayCheck a{power, false, 1, 0};
    std::size_t bad = 0;
    a.holds = strictly_decreasing_from(outside_vals, 0, bad);
    if (!a.holds) a.offending = outside_idx[bad];
    // On N1 the tail starts after the last zero of S.
    const std::size_t from = p.sparse_k.back();
    DecayCheck c{power, false, from + 1, 0};
    c.holds = strictly_decreasing_from(on_vals, from, bad);
    if (!c.holds) c.offending = p.n1[bad];
    for (const DecayCheck* dc : {&a, &c}) {
      if (strict && !dc->holds) {
        std::ostringstream os;
        os << "coefficient decay fails at index " << dc->offending << " for N = " << power;
        throw Error(ErrorKind::DecayViolation, os.str());
      }
    }
    p.decay_outside_n1.push_back(a);
    p.decay_on_n1.push_back(c);
  }

  // Partial fraction identities on sample points.
  auto sum_d = [&](const C& z) {
    C s = C(0);
    for (std::size_t i = 0; i < range; ++i) s += C(p.d[i]) / (z - C(t[i]));
    return s;
  };
  auto sum_nu = [&](const C& z) {
    C s = C(0);
    for (std::size_t i = 0; i < range; ++i) s += C(p.nu[i]) / (C(t[i]) - z);
    return s;
  };
  p.partial_fraction_residual = 0.0;
  for (std::size_t i = 0; i < range; ++i) {
    const C z(t[i] * Real(1.3), t[i] * Real(0.1));
    const C lhs = b.b0_over_a0(z) / b.s_poly(z);
    C rhs = C(0);
    for (std::size_t k = 0; k < K; ++k) rhs += C(p.p[k]) / (C(t[n1[k]]) - z);
    const C g_prod = lhs * b.gamma(z, p.q);
    const C g_sum = sum_d(z);
    p.partial_fraction_residual = std::max(
        {p.partial_fraction_residual, to_d(Real(abs(lhs - rhs) / abs(rhs))),
         to_d(Real(abs(g_prod - g_sum) / abs(g_sum)))});
  }

  // B(t_n) / A'(t_n) from the product forms of A and B.
  p.weight_identity_residual = 0.0;
  for (std::size_t i = 0; i < range; ++i) {
    Real prod = Real(1);
    for (std::size_t l = 0; l < range; ++l)
      if (l != i) prod *= 1 - t[i] / t[l];
    const Real bt = p.nu[i] * prod / t[i];
    const Real ap = -prod / t[i];
    p.weight_identity_residual =
        std::max(p.weight_identity_residual, to_d(Real(abs(bt / ap + p.nu[i]) / p.nu[i])));
  }

  // Sandwich envelope constants on a grid in the upper half-plane.
  {
    const Real tmax = t.back();
    std::vector<Real> xs{Real(0)};
    for (int j = -2; j <= 12; ++j) {
      const Real x = pow(Real(10), Real(j));
      if (x > 4 * tmax) break;
      xs.push_back(x);
      xs.push_back(-x);
    }
    for (std::size_t i = 0; i < range; i += 3) xs.push_back(t[i] * Real(1.01));
    const std::vector<Real> ys{Real(0.01), Real(0.1), Real(1), Real(10), Real(100), tmax};
    Real c1 = Real(-1), c2 = Real(0);
    for (const Real& x : xs) {
      for (const Real& y : ys) {
        const C z(x, y);
        const Real mod = abs(sum_d(z)) * abs(b.s_poly(z));
        const Real w = y / (x * x + y * y + 1);
        const Real lower = mod / (w * w);
        const Real upper = mod * w * w;
        if (c1 < 0 || lower < c1) c1 = lower;
        if (upper > c2) c2 = upper;
      }
    }
    p.sandwich_c1 = to_d(c1);
    p.sandwich_c2 = to_d(c2);
    p.sandwich_ok = p.sandwich_c1 > 0.0 && std::isfinite(p.sandwich_c2);
  }

  // |E(z)| > |E*(z)| for E = A - iB, i.e. |1 - iB/A| > |1 + iB/A| in the upper half-plane.
  {
    p.hermite_biehler = true;
    std::vector<C> pts;
    for (std::size_t i = 0; i < range; ++i) pts.emplace_back(t[i], t[i] / 2);
    for (int x = -10; x <= 10; ++x) {
      pts.emplace_back(Real(x), Real(0.5));
      pts.emplace_back(Real(x), Real(2));
    }
    const C one(Real(1), Real(0)), im(Real(0), Real(1));
    for (const C& z : pts) {
      const C h = sum_nu(z);
      if (!(abs(one - im * h) > abs(one + im * h))) p.hermite_biehler = false;
    }
  }

  {
    Real s = Real(0);
    for (std::size_t i = 0; i < range; ++i) {
      if (in_n2[i]) continue;
      s += p.nu[i];
      p.nu_partial_outside_n2.push_back(to_d(log10(s)));
    }
    Real inv = Real(0);
    for (std::size_t m : p.n2) {
      inv += 1 / t[m - 1];
      p.inv_t_partial_n2.push_back(to_d(inv));
    }
  }
  return p;
}

template IncompletenessPipeline<double> incompleteness_build<double>(const std::vector<double>&,
                                                         const IncompletenessOptions&, bool);
template IncompletenessPipeline<long double> incompleteness_build<long double>(const std::vector<long double>&,
                                                                   const IncompletenessOptions&, bool);
template IncompletenessPipeline<Mp50> incompleteness_build<Mp50>(const std::vector<Mp50>&,
                                                     const IncompletenessOptions&, bool);
template std::vector<double> default_incompleteness_spectrum<double>(std::size_t);
template std::vector<long double> default_incompleteness_spectrum<long double>(std::size_t);
template std::vector<Mp50> default_incompleteness_spectrum<Mp50>(std::size_t);

}  // namespace splab::gallery
