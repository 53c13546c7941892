#include <immintrin.h>

#include <array>

#include "splab/kernels/cauchy.hpp"

namespace splab::kernels::avx2 {

namespace {

struct KahanLanes {
  __m256d sum = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();
  void add(__m256d x) {
    const __m256d y = _mm256_sub_pd(x, c);
    const __m256d t = _mm256_add_pd(sum, y);
    c = _mm256_sub_pd(_mm256_sub_pd(t, sum), y);
    sum = t;
  }
};

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

double reduce(const KahanLanes& acc, Kahan tail) {
  alignas(32) std::array<double, 4> s{};
  alignas(32) std::array<double, 4> c{};
  _mm256_store_pd(s.data(), acc.sum);
  _mm256_store_pd(c.data(), acc.c);
  for (int l = 0; l < 4; ++l) {
    tail.add(s[l]);
    tail.add(-c[l]);
  }
  return tail.sum;
}

struct ScalarAcc {
  Kahan ar, ai, dr, di;
  void term(double t, double wr, double wi, double x, double y) {
    const double d = t - x;
    const double mod2 = d * d + y * y;
    const double inv = 1.0 / (t * mod2);
    ar.add((wr * d - wi * y) * inv);
    ai.add((wr * y + wi * d) * inv);
    const double u = d * d - y * y;
    const double v = 2.0 * d * y;
    const double inv2 = 1.0 / (mod2 * mod2);
    dr.add((wr * u - wi * v) * inv2);
    di.add((wr * v + wi * u) * inv2);
  }
};

}  // namespace

CauchySums cauchy_sums(AtomView atoms, Complex z, std::size_t skip) {
  const double x = z.real();
  const double y = z.imag();
  const __m256d vx = _mm256_set1_pd(x);
  const __m256d vy = _mm256_set1_pd(y);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d y2 = _mm256_mul_pd(vy, vy);

  KahanLanes ar, ai, dr, di;
  ScalarAcc rest;

  const std::size_t n = atoms.t.size();
  const double* tp = atoms.t.data();
  const double* wrp = atoms.wr.data();
  const double* wip = atoms.wi.data();

  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    if (skip >= k && skip < k + 4) {
      for (std::size_t j = k; j < k + 4; ++j) {
        if (j != skip) rest.term(tp[j], wrp[j], wip[j], x, y);
      }
      continue;
    }
    const __m256d t = _mm256_loadu_pd(tp + k);
    const __m256d wr = _mm256_loadu_pd(wrp + k);
    const __m256d wi = _mm256_loadu_pd(wip + k);
    const __m256d d = _mm256_sub_pd(t, vx);
    const __m256d dd = _mm256_mul_pd(d, d);
    const __m256d mod2 = _mm256_add_pd(dd, y2);
    const __m256d inv = _mm256_div_pd(one, _mm256_mul_pd(t, mod2));
    ar.add(_mm256_mul_pd(
        _mm256_sub_pd(_mm256_mul_pd(wr, d), _mm256_mul_pd(wi, vy)), inv));
    ai.add(_mm256_mul_pd(
        _mm256_add_pd(_mm256_mul_pd(wr, vy), _mm256_mul_pd(wi, d)), inv));
    const __m256d u = _mm256_sub_pd(dd, y2);
    const __m256d v = _mm256_mul_pd(two, _mm256_mul_pd(d, vy));
    const __m256d inv2 = _mm256_div_pd(one, _mm256_mul_pd(mod2, mod2));
    dr.add(_mm256_mul_pd(
        _mm256_sub_pd(_mm256_mul_pd(wr, u), _mm256_mul_pd(wi, v)), inv2));
    di.add(_mm256_mul_pd(
        _mm256_add_pd(_mm256_mul_pd(wr, v), _mm256_mul_pd(wi, u)), inv2));
  }
  for (; k < n; ++k) {
    if (k != skip) rest.term(tp[k], wrp[k], wip[k], x, y);
  }

  return {Complex(reduce(ar, rest.ar), reduce(ai, rest.ai)),
          Complex(reduce(dr, rest.dr), reduce(di, rest.di))};
}

}  // namespace splab::kernels::avx2
