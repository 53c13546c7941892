#include "splab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace splab::quad {

namespace {

// Kronrod 15-point nodes/weights and the embedded Gauss 7-point weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  Complex value;
  double error;
};

Panel gk15(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const Complex fc = f(c);
  Complex k = fc * kWgk[7];
  Complex g = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[static_cast<std::size_t>(j)];
    const Complex s = f(c - dx) + f(c + dx);
    k += s * kWgk[static_cast<std::size_t>(j)];
    if (j % 2 == 1) g += s * kWg[static_cast<std::size_t>(j / 2)];
  }
  return {k * h, std::abs((k - g) * h)};
}

void recurse(const Integrand& f, double a, double b, double tol, int depth,
             Result& acc) {
  const Panel p = gk15(f, a, b);
  acc.evaluations += 15;
  if (p.error <= tol || depth <= 0 || !(b - a > 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b)))) {
    acc.value += p.value;
    acc.error += p.error;
    return;
  }
  const double m = 0.5 * (a + b);
  recurse(f, a, m, 0.5 * tol, depth - 1, acc);
  recurse(f, m, b, 0.5 * tol, depth - 1, acc);
}

}  // namespace

Result adaptive_gk(const Integrand& f, double a, double b, double abs_tol,
                   double rel_tol, int max_depth) {
  Result r;
  if (a == b) return r;
  // A coarse pass fixes the scale for the relative tolerance.
  const Panel coarse = gk15(f, a, b);
  const double tol = std::max(abs_tol, rel_tol * std::abs(coarse.value));
  recurse(f, a, b, tol, max_depth, r);
  r.evaluations += 15;
  return r;
}

LineResult integrate_real_line(const Integrand& f, std::span<const double> breakpoints,
                               double rel_tol, double tail_rel, double max_radius) {
  std::vector<double> bp(breakpoints.begin(), breakpoints.end());
  std::sort(bp.begin(), bp.end());
  double lo = bp.empty() ? -1.0 : bp.front();
  double hi = bp.empty() ? 1.0 : bp.back();
  const double span = std::max({1.0, hi - lo, std::abs(lo), std::abs(hi)});
  lo -= span;
  hi += span;

  LineResult out;
  auto add_piece = [&](double a, double b, double abs_tol) {
    const Result r = adaptive_gk(f, a, b, abs_tol, rel_tol);
    out.value += r.value;
    out.error += r.error;
    out.evaluations += r.evaluations;
  };

  // Core: [lo, hi] split at the breakpoints.
  std::vector<double> cuts{lo};
  for (double x : bp)
    if (x > cuts.back()) cuts.push_back(x);
  if (hi > cuts.back()) cuts.push_back(hi);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) add_piece(cuts[i], cuts[i + 1], 0.0);

  // Grow symmetric geometric panels until the fitted tail is small.
  double left = lo, right = hi;
  double width = span;
  auto tail_of = [&](double x, double dir) {
    const double f1 = std::abs(f(x));
    const double f2 = std::abs(f(x + dir * std::abs(x)));
    if (f1 == 0.0) return 0.0;
    const double p = std::log2(f1 / std::max(f2, 1e-300));
    if (!(p > 1.05)) return std::numeric_limits<double>::infinity();
    return f1 * std::abs(x) / (p - 1.0);
  };
  while (true) {
    const double tails = tail_of(right, 1.0) + tail_of(left, -1.0);
    out.tail_bound = tails;
    out.radius = std::max(std::abs(left), std::abs(right));
    if (tails <= tail_rel * std::abs(out.value) || out.radius >= max_radius) break;
    const double abs_tol = 0.1 * tail_rel * std::abs(out.value);
    add_piece(right, right + width, abs_tol);
    add_piece(left - width, left, abs_tol);
    right += width;
    left -= width;
    width *= 2.0;
  }
  return out;
}

const Rule& gauss_legendre(int n) {
  static std::mutex mtx;
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  Rule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[static_cast<std::size_t>(i)] = -x;
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return cache.emplace(n, std::move(r)).first->second;
}

}  // namespace splab::quad
