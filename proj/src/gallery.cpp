#include "splab/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "splab/summation.hpp"

namespace splab::gallery {

namespace {

double sharp_t(std::size_t n) {
  const double x = static_cast<double>(n) - 0.5;
  return x * x;
}

double sharp_c(std::size_t n) {
  const double sign = (n % 2 == 1) ? 1.0 : -1.0;
  return (2.0 / kPi) * sign * (static_cast<double>(n) - 0.5);
}

bool tail_decreasing(const RealVec& terms) {
  for (std::size_t i = terms.size() / 2; i + 1 < terms.size(); ++i)
    if (!(terms[i + 1] < terms[i])) return false;
  return true;
}

}  // namespace

SharpInstance sharp_instance(double eps, double alpha1, double alpha2, std::size_t n) {
  if (!(alpha1 >= 0.0) || !(alpha2 >= 0.0) || !(alpha1 + alpha2 < 1.0)) {
    throw Error(ErrorKind::BadParameters, "need alpha1, alpha2 >= 0 and alpha1 + alpha2 < 1");
  }
  if (!(eps > 0.0) || std::abs(eps - (1.0 - alpha1 - alpha2)) > 1e-12) {
    throw Error(ErrorKind::BadParameters, "eps must equal 1 - alpha1 - alpha2 > 0");
  }
  if (n == 0) throw Error(ErrorKind::BadParameters, "truncation must be positive");

  const double power = 2.0 - 2.0 * alpha1 - 0.5 - eps;
  std::vector<data::Atom> atoms;
  ComplexVec a, b;
  RealVec ta, tb, c_seq, pa, pb;
  KahanSum<double> sa, sb;
  for (std::size_t k = 1; k <= n; ++k) {
    const double t = sharp_t(k);
    const double c = sharp_c(k);
    const double ap = std::pow(static_cast<double>(k), power);
    const double bp = c / ap;
    atoms.push_back({t, 1.0});
    a.emplace_back(ap);
    b.emplace_back(bp);
    c_seq.push_back(c);
    ta.push_back(ap * ap * std::pow(t, 2.0 * alpha1 - 2.0));
    tb.push_back(bp * bp * std::pow(t, 2.0 * alpha2 - 2.0));
    sa += ta.back();
    sb += tb.back();
    pa.push_back(sa.value());
    pb.push_back(sb.value());
  }
  return SharpInstance{n,
                       eps,
                       alpha1,
                       alpha2,
                       data::RankOneData(data::DiscreteSpectralData(std::move(atoms)), std::move(a),
                                         std::move(b), Complex{1.0, 0.0}),
                       std::move(c_seq),
                       std::move(pa),
                       std::move(pb),
                       tail_decreasing(ta) && tail_decreasing(tb)};
}

model::ModelPair sharp_model(const SharpInstance& inst) {
  model::ModelOptions opts;
  opts.delta = 0.0;
  return model::build_model(inst.data, opts);
}

SharpInstance sharp_flipped(const SharpInstance& inst, std::size_t k) {
  if (k >= inst.n) throw Error(ErrorKind::BadParameters, "flip index out of range");
  SharpInstance out = inst;
  ComplexVec a(inst.data.a().begin(), inst.data.a().end());
  ComplexVec b(inst.data.b().begin(), inst.data.b().end());
  b[k] = -b[k];
  out.c[k] = -out.c[k];
  out.data = data::RankOneData(inst.data.base(), std::move(a), std::move(b), inst.data.kappa());
  return out;
}

Complex cos_pi_sqrt_series(Complex z) {
  const Complex w = kPi * kPi * z;
  Complex term{1.0, 0.0};
  Complex sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= -w / (static_cast<double>(2 * k - 1) * static_cast<double>(2 * k));
    sum += term;
    if (static_cast<double>(k) > std::abs(w) && std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

Complex cos_pi_sqrt(Complex z) { return std::cos(kPi * std::sqrt(z)); }

MittagLefflerCheck mittag_leffler_check(Complex z, std::size_t n) {
  const double az = std::abs(z);
  for (std::size_t k = 1;; ++k) {
    const double t = sharp_t(k);
    if (std::abs(z - t) < 0.25) {
      std::ostringstream os;
      os << "z is within 0.25 of the pole t_" << k << " = " << t;
      throw Error(ErrorKind::NearPole, os.str());
    }
    if (t > az + 1.0) break;
  }

  MittagLefflerCheck out;
  out.lhs = 1.0 / cos_pi_sqrt(z);
  KahanSum<Complex> rhs;
  rhs += Complex{1.0, 0.0};
  for (std::size_t k = 1; k <= n; ++k) {
    const double t = sharp_t(k);
    rhs += (z / (t * (t - z))) * sharp_c(k);
  }
  out.rhs_partial = rhs.value();
  out.err = std::abs(out.lhs - out.rhs_partial);

  // Terms n in (N, M] explicitly, then the integral bound from X = M - 1/2 on,
  // valid once X^2 exceeds |z|.
  std::size_t m = n;
  while ((static_cast<double>(m) - 0.5) * (static_cast<double>(m) - 0.5) < 2.0 * az + 1.0) ++m;
  KahanSum<double> tail;
  for (std::size_t k = n + 1; k <= m; ++k) {
    const double t = sharp_t(k);
    tail += az * std::abs(sharp_c(k)) / (t * std::abs(t - z));
  }
  const double x = static_cast<double>(m) - 0.5;
  tail += -std::log1p(-az / (x * x)) / kPi;
  out.tail_bound = tail.value();
  out.within_bound = out.err <= out.tail_bound;
  return out;
}

ZeroFreeness sharp_zero_freeness(const SharpInstance& inst, diag::Rectangle rect) {
  const model::ModelPair m = sharp_model(inst);
  ZeroFreeness out;
  out.window = diag::volterra_window_check(m, rect);
  out.min_abs_phi = out.window.min_abs_phi;
  return out;
}

double sharp_identity_discrepancy(const SharpInstance& inst, const ComplexVec& grid) {
  const model::ModelPair m = sharp_model(inst);
  double worst = 0.0;
  for (Complex z : grid) {
    Complex prod{1.0, 0.0};
    for (std::size_t k = 1; k <= inst.n; ++k) prod *= 1.0 - z / sharp_t(k);
    const Complex v = m.phi(z) * 2.0 * prod / (1.0 + m.theta(z)) - 1.0;
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

LacunaryReport lacunary_sequence(const RealVec& t_seq, std::size_t count) {
  LacunaryReport out;
  out.x.push_back(2.0);
  while (count == 0 || out.x.size() < count) {
    const double lower = 2.0 * out.x.back();
    double tau = std::numeric_limits<double>::infinity();
    for (double t : t_seq)
      if (t > lower) tau = std::min(tau, t);
    if (!std::isfinite(tau)) break;
    out.witnesses.push_back(tau);
    out.x.push_back(std::floor(tau * tau) + 1.0);
  }
  const std::size_t need = std::max<std::size_t>(count, 2);
  if (out.x.size() < need) {
    std::ostringstream os;
    os << "spectrum allows " << out.x.size() << " terms, " << need << " requested";
    throw Error(ErrorKind::ExhaustedInput, os.str());
  }
  out.inequalities_hold = true;
  for (std::size_t k = 0; k < out.x.size(); ++k) {
    if (out.x[k] < std::exp2(std::exp2(static_cast<double>(k)))) out.inequalities_hold = false;
    if (k + 1 < out.x.size()) {
      const double root = std::sqrt(out.x[k + 1]);
      const double w = out.witnesses[k];
      if (!(2.0 * out.x[k] < root) || !(w > 2.0 * out.x[k] && w < root)) out.inequalities_hold = false;
    }
  }
  return out;
}

GapReport synthesis_gap_check(const RealVec& s, double c, double n_power, const RealVec& nu,
                              const RealVec& t, double nu_c, double nu_m) {
  if (!(n_power > 0.0)) throw Error(ErrorKind::BadParameters, "the gap exponent N must be positive");
  if (!(c > 0.0)) throw Error(ErrorKind::BadParameters, "the gap constant C must be positive");
  if (s.size() < 3) throw Error(ErrorKind::BadParameters, "need at least three points");
  if (nu.size() != t.size()) throw Error(ErrorKind::BadParameters, "nu and t lengths differ");

  GapReport out;
  out.power_gap_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double gap = std::abs(s[i + 1] - s[i]);
    const double margin = c * gap / std::pow(std::abs(s[i]), n_power);
    out.power_gap_margin = std::min(out.power_gap_margin, margin);
    out.gap_ratios.push_back(gap / std::abs(s[i]));
  }
  out.power_gap = out.power_gap_margin >= 1.0;

  const RealVec& r = out.gap_ratios;
  const std::size_t from = r.size() / 2;
  bool decreasing = true;
  for (std::size_t i = from; i + 1 < r.size(); ++i)
    if (!(r[i + 1] < r[i])) decreasing = false;
  out.little_o = decreasing && r.back() <= 0.75 * r[from];

  if (!nu.empty()) {
    out.nu_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nu.size(); ++i)
      out.nu_margin = std::min(out.nu_margin, nu[i] * std::pow(std::abs(t[i]) + 1.0, nu_m) / nu_c);
    out.nu_lower_bound = out.nu_margin >= 1.0;
  }
  return out;
}

std::vector<MaxK> incompleteness_max_k(const std::vector<std::size_t>& ks) {
  std::vector<MaxK> out;
  auto scan = [&](auto tag, const char* name) {
    using Real = decltype(tag);
    MaxK r;
    r.precision = name;
    for (std::size_t k : ks) {
      IncompletenessOptions opts;
      opts.k = k;
      bool ok = false;
      try {
        const auto p = incompleteness_build<Real>(default_incompleteness_spectrum<Real>(2 * k), opts);
        ok = p.residue_ok;
      } catch (const Error&) {
        ok = false;
      }
      if (!ok) {
        r.first_failure = k;
        break;
      }
      r.max_k = k;
    }
    out.push_back(r);
  };
  scan(double{}, "double");
  scan(static_cast<long double>(0), "long double");
  scan(Mp50{}, "cpp_bin_float_50");
  return out;
}

}  // namespace splab::gallery
