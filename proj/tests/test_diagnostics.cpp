#include <cmath>
#include <random>

#include "doctest.h"
#include "splab/diagnostics.hpp"

using namespace splab;

namespace {

data::RankOneData make(std::vector<data::Atom> atoms, ComplexVec a, ComplexVec b, Complex kappa) {
  return data::RankOneData(data::DiscreteSpectralData(std::move(atoms)), std::move(a), std::move(b), kappa);
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidData;
}

}  // namespace

TEST_CASE("growth of phi along the imaginary axis") {
  // phi(iy) tends to a nonzero constant: y |phi(iy)| grows like y.
  const auto m = model::build_model(make({{-1.0, 1.0}, {1.0, 1.0}}, {1.0, 1.0}, {1.0, 1.0}, 1.0));
  const auto g = diag::growth_profile(m, 1e4, 200);
  CHECK(g.exact_exponent == 0);
  CHECK(std::abs(g.fitted_exponent) < 0.05);
  CHECK(g.envelope_c > 0.0);
}

TEST_CASE("integral test converges away from the axis") {
  const auto m = model::build_model(make({{-1.0, 1.0}, {1.0, 1.0}}, {1.0, 1.0}, {1.0, 1.0}, 1.0));
  const auto r = diag::integral_test(m, 2.0, 1.0, 0.5);
  CHECK(std::isfinite(r.value));
  CHECK(r.value > 0.0);
}

TEST_CASE("integral test refuses a real zero on the axis") {
  const auto m = model::build_model(make({{-1.0, 1.0}, {1.0, 1.0}}, {1.0, 1.0}, {1.0, 1.0}, 1.0));
  CHECK(kind_of([&] { diag::integral_test(m, 2.0, 1.0, 0.0); }) == ErrorKind::DivergentNearRealZero);
}

TEST_CASE("Macaev matrices") {
  const auto d = data::RankNData::from_rank_one(make({{-1.0, 1.0}, {1.0, 1.0}}, {1.0, 1.0}, {1.0, 1.0}, 1.0));
  const auto r = diag::macaev_check(d);
  CHECK(r.singular_invertible);
  CHECK(r.singular_sigma_min == doctest::Approx(1.0));
}

TEST_CASE("mass at infinity detection") {
  const auto m = model::build_model(make({{-2.0, 0.5}, {0.5, 1.0}, {3.0, 2.0}}, {1.0, 1.0, 1.0},
                                         {{0.8, 0.1}, {1.0, 0.0}, {0.4, 0.6}}, 2.0));
  const auto with = diag::mass_detect(m, m.theta_at_infinity());
  CHECK(with.has_mass);
  const auto clark = model::clark_measure(m, m.theta_at_infinity());
  CHECK(with.p_est == doctest::Approx(clark.p).epsilon(1e-3));
  CHECK_FALSE(diag::mass_detect(m, -1.0).has_mass);
}

TEST_CASE("synthesis defect of a selfadjoint instance") {
  std::mt19937_64 rng(3);
  auto d = engine::random_instance(rng, {5, true});
  const ComplexVec b(d.b().begin(), d.b().end());
  const data::RankOneData sa(d.base(), b, b, d.kappa().real());
  const auto sys = engine::eigensystem(sa, model::build_model(sa));
  const auto sweep = diag::enumerate_partitions(sys);
  CHECK(sweep.exhaustive);
  CHECK(sweep.evaluated == 32);
  CHECK(sweep.worst.sigma_min == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("synthesis defect rejects a broken system") {
  std::mt19937_64 rng(4);
  const auto d = engine::random_instance(rng, {4, false});
  auto sys = engine::eigensystem(d, model::build_model(d));
  sys.y.col(0) *= 2.0;
  CHECK(kind_of([&] { diag::synthesis_defect(sys, std::vector<bool>(4, false)); }) == ErrorKind::NotBiorthogonal);
}

TEST_CASE("partition sampling is deterministic") {
  std::mt19937_64 rng(12);
  const auto d = engine::random_instance(rng, {13, false});
  const auto sys = engine::eigensystem(d, model::build_model(d));
  const auto a = diag::enumerate_partitions(sys, 50, 77);
  const auto b = diag::enumerate_partitions(sys, 50, 77);
  CHECK_FALSE(a.exhaustive);
  CHECK(a.evaluated == 50);
  CHECK(a.worst.sigma_min == b.worst.sigma_min);
  CHECK(a.worst.in_j2 == b.worst.in_j2);
}

TEST_CASE("winding number counts zeros") {
  const Complex z1(0.5, 0.5), z2(2.0, 0.3);
  const auto w = diag::winding_number(
      [&](Complex z) { return 1.0 / (z - z1) + 1.0 / (z - z2) + 2.0 / (z - Complex(5.0, 5.0)); },
      {0.0, 3.0, 0.1, 1.0});
  CHECK(w.converged);
  CHECK(std::abs(w.value - Complex(2.0)) < 1e-6);
}

TEST_CASE("window count on a model with known zeros") {
  const auto m = model::build_model(make({{-1.0, 1.0}, {1.0, 1.0}}, {1.0, 1.0}, {1.0, 1.0}, 1.0));
  // zeros at 1 +- sqrt 2 lie on the real axis, so lift the rectangle slightly.
  const auto w = diag::volterra_window_check(m, {-3.0, 3.0, 0.2, 2.0});
  CHECK(w.count == 0);
  const auto c = model::build_model(make({{-2.0, 0.5}, {0.5, 1.0}, {3.0, 2.0}}, {{1.0, 0.5}, {-0.3, 0.2}, {0.7, -1.0}},
                                         {{0.8, 0.1}, {1.0, 0.0}, {0.4, 0.6}}, {1.5, -0.5}));
  const auto zs = engine::phi_zeros(c);
  long upper = 0;
  for (Complex z : zs.raw_phi)
    if (z.imag() > 1e-3 && z.imag() < 20.0 && std::abs(z.real()) < 20.0) ++upper;
  CHECK(diag::volterra_window_check(c, {-20.0, 20.0, 1e-3, 20.0}).count == upper);
}

TEST_CASE("splitmix is a bijection sample") {
  CHECK(diag::splitmix64(0) != diag::splitmix64(1));
  CHECK(diag::splitmix64(42) == diag::splitmix64(42));
}
