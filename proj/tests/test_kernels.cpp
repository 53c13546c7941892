#include <random>

#include "doctest.h"
#include "splab/kernels/cauchy.hpp"

using namespace splab;
using namespace splab::kernels;

namespace {

struct Atoms {
  RealVec t, wr, wi;
  AtomView view() const { return {t, wr, wi}; }
};

Atoms random_atoms(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  Atoms a;
  for (std::size_t i = 0; i < n; ++i) {
    double t = u(rng);
    if (std::abs(t) < 0.1) t += 1.0;
    a.t.push_back(t);
    a.wr.push_back(u(rng));
    a.wi.push_back(u(rng));
  }
  return a;
}

CauchySums naive(const Atoms& a, Complex z, std::size_t skip) {
  CauchySums s;
  for (std::size_t i = 0; i < a.t.size(); ++i) {
    if (i == skip) continue;
    const Complex w(a.wr[i], a.wi[i]);
    s.over_t += w / (a.t[i] * (a.t[i] - z));
    s.squared += w / ((a.t[i] - z) * (a.t[i] - z));
  }
  return s;
}

}  // namespace

TEST_CASE("generic kernel matches the naive sum") {
  const auto a = random_atoms(37, 1);
  const Complex z(0.3, 2.0);
  const auto g = generic::cauchy_sums(a.view(), z, kNoSkip);
  const auto n = naive(a, z, kNoSkip);
  CHECK(std::abs(g.over_t - n.over_t) <= 1e-12 * (1.0 + std::abs(n.over_t)));
  CHECK(std::abs(g.squared - n.squared) <= 1e-12 * (1.0 + std::abs(n.squared)));
}

TEST_CASE("skip index drops exactly one atom") {
  const auto a = random_atoms(9, 2);
  const Complex z(1.0, 0.5);
  for (std::size_t k = 0; k < 9; ++k) {
    const auto g = generic::cauchy_sums(a.view(), z, k);
    const auto n = naive(a, z, k);
    CHECK(std::abs(g.over_t - n.over_t) <= 1e-12 * (1.0 + std::abs(n.over_t)));
  }
}

TEST_CASE("empty input gives zero") {
  const Atoms a;
  const auto g = cauchy_sums(a.view(), Complex(1.0, 1.0));
  CHECK(g.over_t == Complex{});
  CHECK(g.squared == Complex{});
}

#if defined(SPLAB_HAVE_AVX2)
TEST_CASE("avx2 kernel agrees with the generic kernel") {
  if (!isa_available(Isa::Avx2)) return;
  for (std::size_t n : {1U, 2U, 3U, 4U, 5U, 7U, 8U, 13U, 64U, 1001U}) {
    const auto a = random_atoms(n, 100 + n);
    for (Complex z : {Complex(0.1, 1e-3), Complex(-7.0, 3.0), Complex(40.0, 0.0)}) {
      for (std::size_t skip : {kNoSkip, std::size_t{0}, n - 1, n / 2}) {
        const auto g = generic::cauchy_sums(a.view(), z, skip);
        const auto v = avx2::cauchy_sums(a.view(), z, skip);
        const double so = 1.0 + std::abs(g.over_t), ss = 1.0 + std::abs(g.squared);
        CHECK(std::abs(g.over_t - v.over_t) <= 1e-13 * so);
        CHECK(std::abs(g.squared - v.squared) <= 1e-13 * ss);
      }
    }
  }
}
#endif

TEST_CASE("forcing an isa changes dispatch") {
  const Isa before = active_isa();
  CHECK(force_isa(Isa::Generic));
  CHECK(active_isa() == Isa::Generic);
  CHECK(to_string(Isa::Generic) == "generic");
  force_isa(before);
  CHECK(active_isa() == before);
}
