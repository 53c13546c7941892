#include "splab/kernels/cauchy.hpp"

namespace splab::kernels::generic {

namespace {

struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

CauchySums cauchy_sums(AtomView atoms, Complex z, std::size_t skip) {
  const double x = z.real();
  const double y = z.imag();
  Kahan ar, ai, dr_, di;
  const std::size_t n = atoms.t.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (k == skip) continue;
    const double t = atoms.t[k];
    const double wr = atoms.wr[k];
    const double wi = atoms.wi[k];
    const double dr = t - x;
    const double mod2 = dr * dr + y * y;
    const double inv = 1.0 / (t * mod2);
    // w * conj(d) / (t |d|^2)
    ar.add((wr * dr - wi * y) * inv);
    ai.add((wr * y + wi * dr) * inv);
    // w * conj(d)^2 / |d|^4
    const double u = dr * dr - y * y;
    const double v = 2.0 * dr * y;
    const double inv2 = 1.0 / (mod2 * mod2);
    dr_.add((wr * u - wi * v) * inv2);
    di.add((wr * v + wi * u) * inv2);
  }
  return {Complex(ar.sum, ai.sum), Complex(dr_.sum, di.sum)};
}

}  // namespace splab::kernels::generic
