#include "splab/herglotz.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "splab/kernels/cauchy.hpp"
#include "splab/quadrature.hpp"
#include "splab/summation.hpp"

namespace splab::model {

CauchyRepresentation::CauchyRepresentation(RealVec poles, ComplexVec residues,
                                           Complex constant)
    : t_(std::move(poles)), w_(std::move(residues)), c0_(constant) {
  if (t_.size() != w_.size()) throw Error(ErrorKind::InvalidData, "poles/residues length mismatch");
  for (std::size_t n = 0; n < t_.size(); ++n) {
    if (t_[n] == 0.0 || (n > 0 && !(t_[n] > t_[n - 1])))
      throw Error(ErrorKind::InvalidData, "poles must be nonzero and strictly increasing");
  }
  wr_.resize(w_.size());
  wi_.resize(w_.size());
  for (std::size_t n = 0; n < w_.size(); ++n) {
    wr_[n] = w_[n].real();
    wi_[n] = w_[n].imag();
  }
  std::vector<std::size_t> order(t_.size());
  for (std::size_t n = 0; n < order.size(); ++n) order[n] = n;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return std::abs(t_[i]) < std::abs(t_[j]); });
  KahanSum<Complex> s;
  for (std::size_t n : order) s += w_[n] / t_[n];
  sum_w_over_t_ = s.value();
}

std::size_t CauchyRepresentation::nearest(double x) const noexcept {
  const auto it = std::lower_bound(t_.begin(), t_.end(), x);
  if (it == t_.begin()) return 0;
  if (it == t_.end()) return t_.size() - 1;
  const auto hi = static_cast<std::size_t>(it - t_.begin());
  return (x - t_[hi - 1] <= t_[hi] - x) ? hi - 1 : hi;
}

CauchyRepresentation::Local CauchyRepresentation::local(Complex z) const {
  Local out;
  if (t_.empty()) {
    out.s = 1.0;
    out.hat = c0_;
    out.hat_prime = 0.0;
    return out;
  }
  const std::size_t k = nearest(z.real());
  const kernels::AtomView view{t_, wr_, wi_};
  const kernels::CauchySums sums = kernels::cauchy_sums(view, z, k);
  const Complex rest = c0_ - w_[k] / t_[k] + z * sums.over_t;
  out.k = k;
  out.s = t_[k] - z;
  out.hat = w_[k] + out.s * rest;
  out.hat_prime = -rest + out.s * sums.squared;
  out.sum_sq = sums.squared;
  return out;
}

Complex CauchyRepresentation::operator()(Complex z) const {
  const Local l = local(z);
  if (t_.empty()) return l.hat;
  if (std::abs(l.s) <= guard(l.k)) {
    std::ostringstream os;
    os << "evaluation within guard distance of pole t=" << t_[l.k];
    throw Error(ErrorKind::EvaluationAtPole, os.str());
  }
  return l.hat / l.s;
}

Complex CauchyRepresentation::derivative(Complex z) const {
  const Local l = local(z);
  if (t_.empty()) return 0.0;
  if (std::abs(l.s) <= guard(l.k)) {
    throw Error(ErrorKind::EvaluationAtPole, "derivative within guard distance of a pole");
  }
  return l.sum_sq + w_[l.k] / (l.s * l.s);
}

// ---------------------------------------------------------------------------

poly::Poly RationalForm::phi_numerator() const { return kI * n_beta; }
poly::Poly RationalForm::phi_tilde_numerator() const { return kI * n_beta_conj; }
poly::Poly RationalForm::theta_numerator() const { return kI * q - p_rho; }
poly::Poly RationalForm::denominator() const { return kI * q + p_rho; }

namespace {

/// Q = prod (1 - z/t_n) and Q_n = Q / (1 - z/t_n) for every n.
struct ProductBasis {
  poly::Poly q;
  std::vector<poly::Poly> q_without;
};

ProductBasis product_basis(std::span<const double> t) {
  const std::size_t n = t.size();
  std::vector<poly::Poly> prefix(n + 1), suffix(n + 1);
  prefix[0] = poly::Poly::constant(1.0);
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] * poly::Poly::linear_normalized(t[k]);
  suffix[n] = poly::Poly::constant(1.0);
  for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] * poly::Poly::linear_normalized(t[k]);
  ProductBasis b;
  b.q = prefix[n];
  b.q_without.reserve(n);
  for (std::size_t k = 0; k < n; ++k) b.q_without.push_back(prefix[k] * suffix[k + 1]);
  return b;
}

/// Numerator of c0 + sum (1/(t-z) - 1/t) w over Q:
///   (c0 - sum w/t) Q + sum (w_n/t_n) Q_n
poly::Poly cauchy_numerator(const ProductBasis& b, const CauchyRepresentation& f) {
  poly::Poly out = f.at_infinity() * b.q;
  for (std::size_t n = 0; n < f.size(); ++n) out += (f.residues()[n] / f.poles()[n]) * b.q_without[n];
  return out;
}

}  // namespace

struct ModelPair::Lazy {
  std::once_flag once;
  RationalForm form;
};

ModelPair::ModelPair(const data::RankOneData& data, ModelOptions opts)
    : beta_(RealVec(data.base().t().begin(), data.base().t().end()), data.beta_weights(),
            data.kappa()),
      rho_(RealVec(data.base().t().begin(), data.base().t().end()),
           [&] {
             const RealVec nu = data.nu();
             return ComplexVec(nu.begin(), nu.end());
           }(),
           0.0),
      beta_conj_(RealVec(data.base().t().begin(), data.base().t().end()),
                 [&] {
                   ComplexVec w = data.beta_weights();
                   for (auto& x : w) x = std::conj(x);
                   return w;
                 }(),
                 std::conj(data.kappa())),
      nu_(data.nu()),
      delta_(0.0),
      lazy_(std::make_shared<Lazy>()) {
  if (opts.enforce_admissibility) {
    const auto report = data::validate(data);
    if (!report.condition_A) {
      std::ostringstream os;
      os << "condition (A) fails: kappa equals omega = (" << report.omega.real() << ", "
         << report.omega.imag() << ")";
      throw Error(ErrorKind::Admissibility, os.str());
    }
  }
  if (opts.delta) {
    delta_ = *opts.delta;
  } else {
    KahanSum<double> s;
    for (std::size_t n : data.base().abs_order()) s += nu_[n] / data.base().t(n);
    delta_ = s.value();
  }
  rho_ = CauchyRepresentation(RealVec(rho_.poles().begin(), rho_.poles().end()),
                              ComplexVec(rho_.residues().begin(), rho_.residues().end()), delta_);
}

ModelPair build_model(const data::RankOneData& data, ModelOptions opts) {
  return ModelPair(data, opts);
}

Complex ModelPair::eval(Which which, Complex z) const {
  switch (which) {
    case Which::Beta: return beta_(z);
    case Which::Rho: return rho_(z);
    case Which::Theta: return theta(z);
    case Which::Phi: return phi(z);
    case Which::PhiTilde: return phi_tilde(z);
  }
  return {};
}

Complex ModelPair::theta(Complex z) const {
  const auto r = rho_.local(z);
  return (kI * r.s - r.hat) / (kI * r.s + r.hat);
}

Complex ModelPair::phi(Complex z) const {
  const auto r = rho_.local(z);
  const auto b = beta_.local(z);
  return kI * b.hat / (kI * r.s + r.hat);
}

Complex ModelPair::phi_tilde(Complex z) const {
  const auto r = rho_.local(z);
  const auto b = beta_conj_.local(z);
  return kI * b.hat / (kI * r.s + r.hat);
}

Complex ModelPair::theta_derivative(Complex z) const {
  const auto r = rho_.local(z);
  const Complex num = kI * r.s - r.hat;
  const Complex den = kI * r.s + r.hat;
  const Complex num_d = -kI - r.hat_prime;
  const Complex den_d = -kI + r.hat_prime;
  return (num_d * den - num * den_d) / (den * den);
}

std::pair<Complex, Complex> ModelPair::phi_with_derivative(Complex z) const {
  const auto r = rho_.local(z);
  const auto b = beta_.local(z);
  const Complex den = kI * r.s + r.hat;
  const Complex den_d = -kI + r.hat_prime;
  const Complex f = kI * b.hat / den;
  const Complex df = kI * (b.hat_prime * den - b.hat * den_d) / (den * den);
  return {f, df};
}

Complex ModelPair::phi_log_derivative(Complex z) const {
  const auto r = rho_.local(z);
  const auto b = beta_.local(z);
  const Complex den = kI * r.s + r.hat;
  const Complex den_d = -kI + r.hat_prime;
  return b.hat_prime / b.hat - den_d / den;
}

Complex ModelPair::theta_at_infinity() const noexcept {
  const Complex r = rho_.at_infinity();
  return (kI - r) / (kI + r);
}

Complex ModelPair::phi_at_infinity() const noexcept {
  return kI * beta_.at_infinity() / (kI + rho_.at_infinity());
}

const RationalForm& ModelPair::rational() const {
  if (!has_rational_form()) {
    std::ostringstream os;
    os << "rational normal form limited to " << kMaxRationalDegree << " atoms, got " << size();
    throw Error(ErrorKind::DegreeOverflow, os.str());
  }
  std::call_once(lazy_->once, [&] {
    const ProductBasis b = product_basis(atoms());
    RationalForm f;
    f.q = b.q;
    f.p_rho = cauchy_numerator(b, rho_);
    f.n_beta = cauchy_numerator(b, beta_);
    f.n_beta_conj = cauchy_numerator(b, beta_conj_);
    // Common scale so the denominator has unit max-coefficient.
    const double m = f.denominator().max_abs_coeff();
    if (m > 0.0 && std::isfinite(m)) {
      const Complex s = 1.0 / m;
      f.q *= s;
      f.p_rho *= s;
      f.n_beta *= s;
      f.n_beta_conj *= s;
    }
    lazy_->form = std::move(f);
  });
  return lazy_->form;
}

// ---------------------------------------------------------------------------

DeBrangesPair::DeBrangesPair(const data::RankOneData& data)
    : DeBrangesPair(RealVec(data.base().t().begin(), data.base().t().end()), data.nu()) {}

DeBrangesPair::DeBrangesPair(RealVec t, RealVec nu)
    : herglotz_(t, ComplexVec(nu.begin(), nu.end()), 0.0), t_(std::move(t)), nu_(std::move(nu)) {
  // herglotz_ must be sum nu/(t - z): constant sum nu/t cancels the -1/t terms.
  KahanSum<double> s;
  for (std::size_t n = 0; n < t_.size(); ++n) s += nu_[n] / t_[n];
  herglotz_ = CauchyRepresentation(t_, ComplexVec(nu_.begin(), nu_.end()), s.value());
}

DeBrangesPair build_debranges(const data::RankOneData& data) { return DeBrangesPair(data); }

Complex DeBrangesPair::A(Complex z) const {
  Complex p = 1.0;
  for (double t : t_) p *= 1.0 - z / t;
  return p;
}

Complex DeBrangesPair::B(Complex z) const {
  if (t_.empty()) return 0.0;
  const auto l = herglotz_.local(z);
  // A(z) / (t_k - z) = (1/t_k) prod_{m != k} (1 - z/t_m)
  Complex p = 1.0 / t_[l.k];
  for (std::size_t m = 0; m < t_.size(); ++m)
    if (m != l.k) p *= 1.0 - z / t_[m];
  return p * l.hat;
}

poly::Poly DeBrangesPair::A_poly() const {
  if (t_.size() > kMaxRationalDegree) throw Error(ErrorKind::DegreeOverflow, "too many atoms for A_poly");
  return product_basis(t_).q;
}

poly::Poly DeBrangesPair::B_poly() const {
  if (t_.size() > kMaxRationalDegree) throw Error(ErrorKind::DegreeOverflow, "too many atoms for B_poly");
  const ProductBasis b = product_basis(t_);
  poly::Poly out = poly::Poly::constant(0.0);
  for (std::size_t n = 0; n < t_.size(); ++n) out += Complex(nu_[n] / t_[n]) * b.q_without[n];
  return out;
}

Complex DeBrangesPair::kernel(Complex w, Complex z) const {
  const Complex ew = std::conj(E(w));
  const Complex esw = std::conj(E_star(w));
  const Complex wb = std::conj(w);
  auto numer = [&](Complex x) { return ew * E(x) - esw * E_star(x); };
  if (std::abs(z - wb) > 1e-7 * (1.0 + std::abs(w))) {
    return numer(z) / (2.0 * kPi * kI * (wb - z));
  }
  // z at conj(w): K = -N'(conj w) / (2 pi i).
  Complex d;
  if (t_.size() <= kMaxRationalDegree) {
    const poly::Poly a = A_poly().derivative();
    const poly::Poly b = B_poly().derivative();
    d = ew * (a(wb) - kI * b(wb)) - esw * (a(wb) + kI * b(wb));
  } else {
    const double h = 1e-5 * (1.0 + std::abs(w));
    d = (numer(wb + h) - numer(wb - h)) / (2.0 * h);
  }
  return -d / (2.0 * kPi * kI);
}

Complex debranges_kernel(const DeBrangesPair& pair, Complex w, Complex z) {
  return pair.kernel(w, z);
}

// ---------------------------------------------------------------------------

namespace {

double solve_increasing(const std::function<double(double)>& f, double lo, double hi) {
  boost::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(
      f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

ClarkMeasure clark_measure(const ModelPair& model, Complex zeta, bool strict) {
  if (std::abs(std::abs(zeta) - 1.0) > 1e-12) {
    throw Error(ErrorKind::BadParameters, "zeta must be unimodular");
  }
  ClarkMeasure out;
  out.zeta = zeta;
  const auto t = model.atoms();
  const std::size_t n = t.size();
  const Complex theta_inf = model.theta_at_infinity();
  out.mass_at_infinity = std::abs(zeta - theta_inf) <= 1e-12;
  if (out.mass_at_infinity && strict) {
    throw Error(ErrorKind::DegenerateZeta, "zeta equals Theta at infinity");
  }

  if (std::abs(zeta + 1.0) <= 1e-15) {
    out.atoms.assign(t.begin(), t.end());
  } else {
    // Theta(x) = zeta  <=>  rho(x) = c with c = i (1 - zeta)/(1 + zeta) real.
    const double c = (kI * (1.0 - zeta) / (1.0 + zeta)).real();
    const auto& rho = model.rho();
    auto f = [&](double x) {
      const auto l = rho.local(Complex(x));
      if (l.s == 0.0) return l.hat.real() > 0 ? std::numeric_limits<double>::infinity()
                                              : -std::numeric_limits<double>::infinity();
      return (l.hat / l.s).real() - c;
    };
    auto nudge = [](double x, double dir) {
      return x + dir * std::max(4.0 * std::numeric_limits<double>::epsilon() * std::abs(x), 1e-300);
    };
    const double rho_inf = rho.at_infinity().real();
    if (!out.mass_at_infinity && c > rho_inf) {
      double step = 1.0 + std::abs(t[0]);
      double lo = t[0] - step;
      while (f(lo) > 0.0 && std::abs(lo) < 1e200) {
        step *= 2.0;
        lo = t[0] - step;
      }
      out.atoms.push_back(solve_increasing(f, lo, nudge(t[0], -1.0)));
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
      out.atoms.push_back(solve_increasing(f, nudge(t[k], 1.0), nudge(t[k + 1], -1.0)));
    }
    if (!out.mass_at_infinity && c < rho_inf) {
      double step = 1.0 + std::abs(t[n - 1]);
      double hi = t[n - 1] + step;
      while (f(hi) < 0.0 && std::abs(hi) < 1e200) {
        step *= 2.0;
        hi = t[n - 1] + step;
      }
      out.atoms.push_back(solve_increasing(f, nudge(t[n - 1], 1.0), hi));
    }
  }

  out.weights.reserve(out.atoms.size());
  for (double x : out.atoms) {
    out.weights.push_back(2.0 / std::abs(model.theta_derivative(Complex(x))));
    out.atom_residual = std::max(out.atom_residual, std::abs(model.theta(Complex(x)) - zeta));
  }

  // (zeta + Theta(i)) / (zeta - Theta(i)) = p + sum sigma/(1 + t^2) + i q
  const Complex th = model.theta(kI);
  const Complex lhs = (zeta + th) / (zeta - th);
  KahanSum<double> s;
  for (std::size_t m = 0; m < out.atoms.size(); ++m)
    s += out.weights[m] / (1.0 + out.atoms[m] * out.atoms[m]);
  out.q = lhs.imag();
  out.p = out.mass_at_infinity ? std::max(0.0, lhs.real() - s.value()) : 0.0;
  return out;
}

Complex kernel_k(const ModelPair& model, Complex lambda, Complex z) {
  const Complex tl = std::conj(model.theta(lambda));
  const Complex den = z - std::conj(lambda);
  if (std::abs(den) <= 1e-8 * (1.0 + std::abs(z))) {
    return -tl * model.theta_derivative(z);
  }
  return (1.0 - tl * model.theta(z)) / den;
}

Complex kernel_k_tilde(const ModelPair& model, Complex lambda, Complex z) {
  const Complex den = z - lambda;
  if (std::abs(den) <= 1e-8 * (1.0 + std::abs(z))) {
    return model.theta_derivative(0.5 * (z + lambda));
  }
  return (model.theta(z) - model.theta(lambda)) / den;
}

// ---------------------------------------------------------------------------

ClarkTransform::ClarkTransform(const ClarkMeasure& clark, const ModelPair& model, ComplexVec u)
    : model_(&model), clark_(clark), u_(std::move(u)) {
  if (clark_.mass_at_infinity || clark_.p > 0.0) {
    throw Error(ErrorKind::MassPresent, "Clark measure has a point mass at infinity");
  }
  if (u_.size() != clark_.atoms.size()) {
    throw Error(ErrorKind::InvalidData, "coefficient count differs from Clark atom count");
  }
}

Complex ClarkTransform::operator()(Complex z) const {
  const Complex th = model_->theta(z);
  Complex acc{};
  for (std::size_t m = 0; m < u_.size(); ++m) {
    if (u_[m] == 0.0) continue;
    const double x = clark_.atoms[m];
    const Complex d = x - z;
    Complex quotient;
    if (std::abs(d) <= 1e-6 * (1.0 + std::abs(x))) {
      // (Theta(x) - Theta(z)) / (x - z) with Theta(x) = zeta.
      quotient = model_->theta_derivative(0.5 * (z + x));
    } else {
      quotient = (clark_.zeta - th) / d;
    }
    acc += u_[m] * clark_.weights[m] * quotient;
  }
  return std::sqrt(kPi) * acc;
}

double ClarkTransform::lebesgue_norm_sq(double rel_tol) const {
  RealVec bp = clark_.atoms;
  bp.insert(bp.end(), model_->atoms().begin(), model_->atoms().end());
  const auto r = quad::integrate_real_line(
      [&](double x) { return Complex(std::norm((*this)(Complex(x)))); }, bp, rel_tol, 1e-9);
  return r.value.real() + r.tail_bound;
}

double ClarkTransform::discrete_norm_sq(const ClarkMeasure& over) const {
  KahanSum<double> s;
  for (std::size_t m = 0; m < over.atoms.size(); ++m)
    s += std::norm((*this)(Complex(over.atoms[m]))) * over.weights[m];
  return kPi * s.value();
}

double ClarkTransform::coefficient_norm_sq() const {
  KahanSum<double> s;
  for (std::size_t m = 0; m < u_.size(); ++m) s += std::norm(u_[m]) * clark_.weights[m];
  return s.value();
}

}  // namespace splab::model
