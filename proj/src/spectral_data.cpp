#include "splab/spectral_data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "splab/summation.hpp"

namespace splab::data {

namespace {

[[noreturn]] void invalid(const std::string& msg) {
  throw Error(ErrorKind::InvalidData, msg);
}

Eigen::Index numerical_rank(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = kNumericalRankRelTol * s(0);
  return static_cast<Eigen::Index>((s.array() > cut).count());
}

double smallest_singular(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().size() ? svd.singularValues().minCoeff() : 0.0;
}

}  // namespace

DiscreteSpectralData::DiscreteSpectralData(std::vector<Atom> atoms) {
  t_.reserve(atoms.size());
  mu_.reserve(atoms.size());
  for (std::size_t n = 0; n < atoms.size(); ++n) {
    const auto& a = atoms[n];
    if (!std::isfinite(a.t) || a.t == 0.0) {
      std::ostringstream os;
      os << "atom " << n << ": t must be finite and nonzero";
      invalid(os.str());
    }
    if (!std::isfinite(a.mu) || !(a.mu > 0.0)) {
      std::ostringstream os;
      os << "atom " << n << ": mu must be positive";
      invalid(os.str());
    }
    if (n > 0 && !(a.t > atoms[n - 1].t)) {
      std::ostringstream os;
      os << "atom " << n << ": t values must be strictly increasing";
      invalid(os.str());
    }
    t_.push_back(a.t);
    mu_.push_back(a.mu);
  }
  if (t_.empty()) invalid("at least one atom is required");
  order_.resize(t_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(), [&](std::size_t i, std::size_t j) {
    return std::abs(t_[i]) < std::abs(t_[j]);
  });
}

std::vector<Atom> DiscreteSpectralData::atoms() const {
  std::vector<Atom> out(size());
  for (std::size_t n = 0; n < size(); ++n) out[n] = {t_[n], mu_[n]};
  return out;
}

std::size_t DiscreteSpectralData::nearest(double x) const noexcept {
  const auto it = std::lower_bound(t_.begin(), t_.end(), x);
  if (it == t_.begin()) return 0;
  if (it == t_.end()) return t_.size() - 1;
  const auto hi = static_cast<std::size_t>(it - t_.begin());
  return (x - t_[hi - 1] <= t_[hi] - x) ? hi - 1 : hi;
}

double DiscreteSpectralData::scale() const noexcept {
  return std::max(std::abs(t_.front()), std::abs(t_.back()));
}

DiscreteSpectralData DiscreteSpectralData::shifted(double shift) const {
  auto a = atoms();
  for (auto& atom : a) atom.t -= shift;
  return DiscreteSpectralData(std::move(a));
}

RankOneData::RankOneData(DiscreteSpectralData base, ComplexVec a, ComplexVec b,
                         Complex kappa)
    : base_(std::move(base)), a_(std::move(a)), b_(std::move(b)), kappa_(kappa) {
  if (a_.size() != base_.size() || b_.size() != base_.size()) {
    invalid("a and b must have one entry per atom");
  }
  if (!std::isfinite(kappa_.real()) || !std::isfinite(kappa_.imag())) {
    invalid("kappa must be finite");
  }
  bool any_a = false;
  for (std::size_t n = 0; n < a_.size(); ++n) {
    if (!std::isfinite(a_[n].real()) || !std::isfinite(a_[n].imag()) ||
        !std::isfinite(b_[n].real()) || !std::isfinite(b_[n].imag())) {
      invalid("a and b entries must be finite");
    }
    any_a = any_a || a_[n] != 0.0;
    if (b_[n] == 0.0) {
      std::ostringstream os;
      os << "b_" << n << " = 0 (b must be nonzero at every atom)";
      invalid(os.str());
    }
  }
  if (!any_a) invalid("a must be nonzero");
}

ComplexVec RankOneData::beta_weights() const {
  ComplexVec w(size());
  for (std::size_t n = 0; n < size(); ++n) w[n] = a_[n] * std::conj(b_[n]) * base_.mu(n);
  return w;
}

RealVec RankOneData::nu() const {
  RealVec v(size());
  for (std::size_t n = 0; n < size(); ++n) v[n] = std::norm(b_[n]) * base_.mu(n);
  return v;
}

RankOneData RankOneData::with_kappa(Complex kappa) const {
  return RankOneData(base_, a_, b_, kappa);
}

RankNData::RankNData(DiscreteSpectralData base, Eigen::MatrixXcd a,
                     Eigen::MatrixXcd b, Eigen::MatrixXcd kappa)
    : base_(std::move(base)), a_(std::move(a)), b_(std::move(b)), kappa_(std::move(kappa)) {
  const auto N = static_cast<Eigen::Index>(base_.size());
  if (a_.rows() != N || b_.rows() != N) invalid("a and b must have one row per atom");
  if (a_.cols() != b_.cols() || a_.cols() == 0) invalid("a and b must have the same positive column count");
  if (kappa_.rows() != a_.cols() || kappa_.cols() != a_.cols()) invalid("kappa must be n x n");
  if (!a_.allFinite() || !b_.allFinite() || !kappa_.allFinite()) invalid("entries must be finite");
  if (numerical_rank(a_) != a_.cols()) invalid("a must have full column rank");
  if (numerical_rank(b_) != b_.cols()) invalid("b must have full column rank");
}

RankNData RankNData::from_rank_one(const RankOneData& d) {
  const auto N = static_cast<Eigen::Index>(d.size());
  Eigen::MatrixXcd a(N, 1), b(N, 1), k(1, 1);
  for (Eigen::Index n = 0; n < N; ++n) {
    a(n, 0) = d.a(static_cast<std::size_t>(n));
    b(n, 0) = d.b(static_cast<std::size_t>(n));
  }
  k(0, 0) = d.kappa();
  return RankNData(d.base(), a, b, k);
}

Complex omega(const RankOneData& data) {
  KahanSum<Complex> s;
  for (const auto n : data.base().abs_order()) {
    s.add(data.a(n) * std::conj(data.b(n)) * data.base().mu(n) / data.base().t(n));
  }
  return s.value();
}

Eigen::MatrixXcd omega_matrix(const RankNData& data) {
  const auto r = data.rank();
  Eigen::MatrixXcd w(r, r);
  for (Eigen::Index j = 0; j < r; ++j) {
    for (Eigen::Index k = 0; k < r; ++k) {
      KahanSum<Complex> s;
      for (const auto n : data.base().abs_order()) {
        const auto i = static_cast<Eigen::Index>(n);
        s.add(data.a()(i, j) * std::conj(data.b()(i, k)) * data.base().mu(n) /
              data.base().t(n));
      }
      w(j, k) = s.value();
    }
  }
  return w;
}

bool classify_real_type(const RankOneData& data) {
  if (std::abs(data.kappa().imag()) > kRealTypeTol * (1.0 + std::abs(data.kappa()))) return false;
  for (std::size_t n = 0; n < data.size(); ++n) {
    const Complex p = data.a(n) * std::conj(data.b(n));
    if (std::abs(p.imag()) > kRealTypeTol * std::abs(data.a(n)) * std::abs(data.b(n))) return false;
  }
  return true;
}

AdmissibilityReport validate(const RankOneData& data) {
  AdmissibilityReport r;
  r.omega = omega(data);
  KahanSum<double> abs_terms;
  for (const auto n : data.base().abs_order()) {
    abs_terms.add(std::abs(data.a(n) * data.b(n)) * data.base().mu(n) /
                  std::abs(data.base().t(n)));
  }
  r.abs_term_sum = abs_terms.value();
  r.tolerance = kAdmissibilityRelTol * (1.0 + std::abs(data.kappa()) + r.abs_term_sum);
  r.kappa_minus_omega = data.kappa() - r.omega;
  r.condition_A = std::abs(r.kappa_minus_omega) > r.tolerance;

  KahanSum<Complex> star;
  for (const auto n : data.base().abs_order()) {
    star.add(data.b(n) * std::conj(data.a(n)) * data.base().mu(n) / data.base().t(n));
  }
  r.condition_A_star = std::abs(std::conj(data.kappa()) - star.value()) > r.tolerance;
  r.real_type = classify_real_type(data);
  return r;
}

AdmissibilityReportN validate(const RankNData& data) {
  AdmissibilityReportN r;
  r.omega = omega_matrix(data);
  // kappa c = b^* A^{-1} a c with (b^* A^{-1} a)_{jk} = omega_{kj}
  r.kappa_minus_omega = data.kappa() - r.omega.transpose();
  r.sigma_min = smallest_singular(r.kappa_minus_omega);
  // kappa^* d = a^* A^{-1} b d with (a^* A^{-1} b)_{jk} = conj(omega_{jk})
  r.sigma_min_star = smallest_singular(data.kappa().adjoint() - r.omega.conjugate());
  double abs_terms = 0.0;
  for (std::size_t n = 0; n < data.size(); ++n) {
    const auto i = static_cast<Eigen::Index>(n);
    abs_terms += data.a().row(i).norm() * data.b().row(i).norm() * data.base().mu(n) /
                 std::abs(data.base().t(n));
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(data.kappa());
  const double kscale = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  r.tolerance = kAdmissibilityRelTol * (1.0 + kscale + abs_terms);
  r.condition_A = r.sigma_min > r.tolerance;
  r.condition_A_star = r.sigma_min_star > r.tolerance;
  return r;
}

GeneralizedWeakReport generalized_weak_report(const RankOneData& data) {
  GeneralizedWeakReport g;
  g.abs_partial_sums.reserve(data.size());
  KahanSum<double> partial;
  for (std::size_t n = 0; n < data.size(); ++n) {
    partial.add(std::abs(data.a(n) * data.b(n)) * data.base().mu(n) /
                std::abs(data.base().t(n)));
    g.abs_partial_sums.push_back(partial.value());
  }
  const auto adm = validate(data);
  g.abs_sum = adm.abs_term_sum;
  g.signed_sum = adm.omega;
  g.satisfies = adm.condition_A;
  return g;
}

RankOneData adjoint(const RankOneData& data) {
  return RankOneData(data.base(), ComplexVec(data.b().begin(), data.b().end()),
                     ComplexVec(data.a().begin(), data.a().end()), std::conj(data.kappa()));
}

RankNData adjoint(const RankNData& data) {
  return RankNData(data.base(), data.b(), data.a(), data.kappa().adjoint());
}

}  // namespace splab::data
