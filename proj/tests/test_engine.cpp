#include <cmath>
#include <random>

#include "doctest.h"
#include "splab/engine.hpp"

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

TEST_CASE("one-atom anchor") {
  const auto r = engine::compare_spectra(make({{1.0, 1.0}}, {1.0}, {1.0}, 2.0));
  REQUIRE(r.oracle.eigenvalues.size() == 1);
  CHECK(std::abs(r.oracle.eigenvalues[0] - 2.0) < 1e-12);
  CHECK(std::abs(r.model.zeros[0] - 2.0) < 1e-12);
  CHECK(r.matches);
}

TEST_CASE("two-atom anchor through both routes") {
  const auto d = make({{-1.0, 1.0}, {1.0, 1.0}}, {1.0, 1.0}, {1.0, 1.0}, 1.0);
  const ComplexVec want{1.0 - std::sqrt(2.0), 1.0 + std::sqrt(2.0)};
  for (auto route : {engine::Route::Direct, engine::Route::Shift}) {
    const auto r = engine::compare_spectra(d, {route});
    CHECK(engine::match(r.oracle.eigenvalues, want).matched_max < 1e-10);
    CHECK(r.matches);
  }
}

TEST_CASE("kappa equal to omega is rejected") {
  const auto d = make({{-1.0, 1.0}, {1.0, 1.0}}, {1.0, 1.0}, {1.0, 1.0}, 0.0);
  CHECK(kind_of([&] { engine::build_matrix(d); }) == ErrorKind::Admissibility);
}

TEST_CASE("hungarian assignment") {
  Eigen::MatrixXd c(3, 3);
  c << 4, 1, 3, 2, 0, 5, 3, 2, 2;
  const auto a = engine::hungarian(c);
  double total = 0.0;
  for (std::size_t i = 0; i < 3; ++i) total += c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a[i]));
  CHECK(total == 5.0);
  CHECK(engine::hausdorff({0.0, 1.0}, {0.0, 1.5}) == doctest::Approx(0.5));
}

TEST_CASE("clustering respects multiplicity") {
  const auto c = engine::cluster({1.0, 1.0 + 1e-9, 3.0}, 3.0);
  REQUIRE(c.size() == 2);
  CHECK(c[0].multiplicity + c[1].multiplicity == 3);
}

TEST_CASE("Jordan block detected by rank sequence") {
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(3, 3);
  j(0, 0) = j(1, 1) = 2.0;
  j(0, 1) = 1.0;
  j(2, 2) = -1.0;
  const auto s = engine::oracle_spectrum(j);
  bool found = false;
  for (const auto& c : s.clusters)
    if (std::abs(c.value - 2.0) < 1e-6) found = !c.jordan_blocks.empty() && c.jordan_blocks[0] == 2;
  CHECK(found);
}

TEST_CASE("random instances agree with the oracle") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    const auto d = engine::random_instance(rng, {1 + static_cast<std::size_t>(i % 10), i % 3 == 0});
    CHECK(data::validate(d).condition_A);
    const auto r = engine::compare_spectra(d);
    CHECK(r.matches);
  }
}

TEST_CASE("inverse, shift and gauge") {
  std::mt19937_64 rng(6);
  const auto d = data::RankNData::from_rank_one(engine::random_instance(rng, {6, false}));
  const auto m = engine::build_matrix(d, {engine::Route::Direct});
  const Eigen::MatrixXcd inv = engine::inverse_realization(d);
  CHECK((m.L * inv - Eigen::MatrixXcd::Identity(6, 6)).norm() < 1e-10 * (1.0 + m.L.norm() * inv.norm()));

  const double lambda = 0.123;
  const auto shifted = engine::build_matrix(engine::shifted_data(d, lambda), {engine::Route::Direct});
  CHECK((shifted.L - (m.L - lambda * Eigen::MatrixXcd::Identity(6, 6))).norm() < 1e-9 * m.L.norm());

  Eigen::MatrixXcd t1(1, 1), t2(1, 1);
  t1(0, 0) = {2.0, 1.0};
  t2(0, 0) = {0.0, -3.0};
  CHECK(engine::gauge_check(d, t1, t2) < 1e-12);
  Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(1, 1);
  CHECK(kind_of([&] { engine::gauge_check(d, zero, t2); }) == ErrorKind::SingularGauge);
}

TEST_CASE("weighted adjoint and the adjoint law") {
  std::mt19937_64 rng(8);
  const auto d = data::RankNData::from_rank_one(engine::random_instance(rng, {5, false}));
  const auto rep = engine::adjoint_check(d);
  CHECK(rep.matrix_residual < 1e-12);
  CHECK(rep.spectrum_residual < 1e-9);

  const auto real = data::RankNData::from_rank_one(engine::random_instance(rng, {5, true}));
  CHECK(engine::adjoint_check(real).conjugate_symmetric);
}

TEST_CASE("eigensystem is biorthogonal and matches kernel samples") {
  std::mt19937_64 rng(9);
  const auto d = engine::random_instance(rng, {5, false});
  const auto m = model::build_model(d);
  const auto sys = engine::eigensystem(d, m);
  const Eigen::MatrixXcd w = sys.mu.cast<Complex>().asDiagonal();
  const Eigen::MatrixXcd g = sys.y.adjoint() * w * sys.x;
  CHECK((g - Eigen::MatrixXcd::Identity(5, 5)).norm() < 1e-9);
  CHECK(sys.offdiag_leakage < 1e-9);
  CHECK(sys.min_collinearity > 1.0 - 1e-9);
}

TEST_CASE("double zero needs a chain") {
  const auto [d, x0] = engine::double_zero_instance();
  const auto m = model::build_model(d);
  CHECK(std::abs(m.phi(x0)) < 1e-10);
  CHECK(kind_of([&] { engine::eigensystem(d, m); }) == ErrorKind::ChainRequired);
  const auto chain = engine::root_chain(m, x0, 2);
  CHECK(chain.order == 2);
  CHECK(kind_of([&] { engine::root_chain(m, x0, 3); }) == ErrorKind::OrderTooHigh);
}

TEST_CASE("generating function vanishes on the chosen set") {
  std::mt19937_64 rng(10);
  const auto d = engine::random_instance(rng, {4, true});
  const auto m = model::build_model(d);
  const auto zs = engine::phi_zeros(m).zeros;
  REQUIRE(zs.size() == 4);
  const auto g = engine::generating_function(m, zs);
  CHECK(g.vanish_residual < 1e-8);
  for (Complex z : zs) CHECK(std::abs(g(z)) < 1e-7);
}

TEST_CASE("rank-two realization against model-free checks") {
  const data::DiscreteSpectralData base({{-2.0, 1.0}, {-0.5, 0.5}, {1.0, 2.0}, {4.0, 1.0}});
  Eigen::MatrixXcd a(4, 2), b(4, 2), k(2, 2);
  a << 1, 0, 0.5, 1, -1, 0.3, 0.2, -0.7;
  b << 0.4, 1, 1, 0, 0.6, -0.5, -0.3, 0.8;
  k << 1.5, 0.2, -0.1, 2.0;
  const data::RankNData d(base, a, b, k);
  const auto m = engine::build_matrix(d, {engine::Route::Direct});
  const Eigen::MatrixXcd inv = engine::inverse_realization(d);
  CHECK((m.L * inv - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-10 * (1.0 + m.L.norm() * inv.norm()));
  CHECK(engine::adjoint_check(d).spectrum_residual < 1e-9);
}
