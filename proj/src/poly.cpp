#include "splab/poly.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace splab::poly {

Poly Poly::linear_normalized(double root) {
  return Poly(ComplexVec{Complex(1.0), Complex(-1.0 / root)});
}

std::size_t Poly::degree(double rel_tol) const noexcept {
  const double cut = rel_tol * max_abs_coeff();
  for (std::size_t k = c_.size(); k-- > 0;) {
    if (std::abs(c_[k]) > cut) return k;
  }
  return 0;
}

double Poly::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (const auto& c : c_) m = std::max(m, std::abs(c));
  return m;
}

Complex Poly::operator()(Complex z) const noexcept {
  Complex acc{};
  for (std::size_t k = c_.size(); k-- > 0;) acc = acc * z + c_[k];
  return acc;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly::constant(0.0);
  ComplexVec d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
  return Poly(std::move(d));
}

Poly Poly::conj() const {
  ComplexVec d(c_.size());
  std::transform(c_.begin(), c_.end(), d.begin(), [](Complex c) { return std::conj(c); });
  return Poly(std::move(d));
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Poly& Poly::operator*=(Complex s) {
  for (auto& c : c_) c *= s;
  return *this;
}

Poly operator-(Poly a, const Poly& b) {
  a += b * Complex(-1.0);
  return a;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.c_.empty() || b.c_.empty()) return Poly();
  ComplexVec r(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return Poly(std::move(r));
}

DivisionResult divide(const Poly& num, const Poly& den) {
  const std::size_t dd = den.degree();
  const Complex lead = den[dd];
  ComplexVec rem(num.coeffs().begin(), num.coeffs().end());
  const std::size_t nd = num.degree();
  if (nd < dd) return {Poly::constant(0.0), num};
  ComplexVec q(nd - dd + 1);
  for (std::size_t k = nd + 1; k-- > dd;) {
    const Complex f = rem[k] / lead;
    q[k - dd] = f;
    for (std::size_t j = 0; j <= dd; ++j) rem[k - dd + j] -= f * den[j];
  }
  rem.resize(dd == 0 ? 1 : dd);
  return {Poly(std::move(q)), Poly(std::move(rem))};
}

void balance(std::span<Complex> a, std::size_t n) {
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  bool done = false;
  int sweeps = 0;
  while (!done && sweeps++ < 200) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a[j * n + i]);
        r += std::abs(a[i * n + j]);
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] *= g;
        for (std::size_t j = 0; j < n; ++j) a[j * n + i] *= f;
      }
    }
  }
}

ComplexVec roots(const Poly& p, const RootOptions& opts) {
  const std::size_t d = p.degree(opts.leading_rel_tol);
  if (d == 0) return {};
  // Strip exact zero roots.
  std::size_t low = 0;
  while (low < d && p[low] == 0.0) ++low;
  const std::size_t m = d - low;
  ComplexVec out(low, Complex{});
  if (m == 0) return out;

  // z = s x with s chosen so |c_low| s^0 and |c_d| s^m balance.
  const double s = std::pow(std::abs(p[low]) / std::abs(p[d]), 1.0 / static_cast<double>(m));
  const double scale = (std::isfinite(s) && s > 0.0) ? s : 1.0;

  ComplexVec monic(m);
  double sp = 1.0;
  for (std::size_t k = 0; k < m; ++k) {
    monic[k] = p[low + k] * sp / (p[d] * std::pow(scale, static_cast<double>(m)));
    sp *= scale;
  }
  std::vector<Complex> comp(m * m, Complex{});
  for (std::size_t i = 1; i < m; ++i) comp[i * m + (i - 1)] = 1.0;
  for (std::size_t i = 0; i < m; ++i) comp[i * m + (m - 1)] = -monic[i];
  balance(comp, m);

  Eigen::MatrixXcd cm(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      cm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = comp[i * m + j];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(cm, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::EigensolveFailure, "companion eigensolve did not converge");
  }
  ComplexVec r(m);
  for (std::size_t k = 0; k < m; ++k) r[k] = es.eigenvalues()(static_cast<Eigen::Index>(k)) * scale;

  if (opts.newton) {
    for (std::size_t k = 0; k < m; ++k) {
      double sep = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < m; ++j)
        if (j != k) sep = std::min(sep, std::abs(r[j] - r[k]));
      Complex z = r[k];
      auto [f, df] = opts.newton(z);
      for (int it = 0; it < opts.newton_iterations && f != 0.0 && df != 0.0; ++it) {
        const Complex step = f / df;
        // Stay inside the root's own neighbourhood; clustered roots are left alone.
        if (!(std::abs(step) < 0.25 * sep)) break;
        const Complex zn = z - step;
        const auto [fn, dfn] = opts.newton(zn);
        if (!(std::abs(fn) < std::abs(f))) break;
        z = zn;
        f = fn;
        df = dfn;
      }
      if (std::abs(z - r[k]) < 0.25 * sep) r[k] = z;
    }
  }
  out.insert(out.end(), r.begin(), r.end());
  return out;
}

}  // namespace splab::poly
