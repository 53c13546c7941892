#include <cmath>

#include "doctest.h"
#include "splab/gallery.hpp"

using namespace splab;

namespace {

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

TEST_CASE("sharp instance entries") {
  const auto s = gallery::sharp_instance(1.0, 0.0, 0.0, 5);
  CHECK(s.data.base().t(2) == 6.25);
  CHECK(s.data.a(0).real() == doctest::Approx(1.0));
  CHECK(s.data.b(0).real() == doctest::Approx(1.0 / kPi));
  CHECK(s.c[1] == doctest::Approx(-3.0 / kPi));
  CHECK(s.data.kappa() == Complex(1.0));
  CHECK(kind_of([] { gallery::sharp_instance(0.5, 0.0, 0.0, 5); }) == ErrorKind::BadParameters);
  CHECK(kind_of([] { gallery::sharp_instance(0.0, 0.5, 0.5, 5); }) == ErrorKind::BadParameters);
}

TEST_CASE("cos(pi sqrt z) forms agree") {
  for (Complex z : {Complex(0.0), Complex(-1.0), Complex(2.0, 1.0)})
    CHECK(std::abs(gallery::cos_pi_sqrt(z) - gallery::cos_pi_sqrt_series(z)) <
          1e-13 * std::abs(gallery::cos_pi_sqrt(z)));
  // the series cancels badly once |z| is large
  const Complex far(30.0, 5.0);
  CHECK(std::abs(gallery::cos_pi_sqrt(far) - gallery::cos_pi_sqrt_series(far)) <
        1e-8 * std::abs(gallery::cos_pi_sqrt(far)));
  CHECK(std::abs(gallery::cos_pi_sqrt(0.25)) < 1e-15);
}

TEST_CASE("Mittag-Leffler expansion") {
  const auto at0 = gallery::mittag_leffler_check(0.0, 10);
  CHECK(std::abs(at0.lhs - 1.0) < 1e-15);
  CHECK(at0.err < 1e-15);

  const auto r = gallery::mittag_leffler_check(-1.0, 1000);
  CHECK(std::abs(r.lhs - 1.0 / std::cosh(kPi)) < 1e-15);
  CHECK(r.within_bound);
  CHECK(r.err < 1e-5);

  // the error shrinks with N and stays inside the bound
  double prev = INFINITY;
  for (std::size_t n : {10U, 100U, 1000U}) {
    const auto c = gallery::mittag_leffler_check({3.0, 2.0}, n);
    CHECK(c.within_bound);
    CHECK(c.err < prev);
    prev = c.err;
  }
  CHECK(kind_of([] { gallery::mittag_leffler_check(2.3, 10); }) == ErrorKind::NearPole);
}

TEST_CASE("sharp instance has no zeros in the window") {
  const auto s = gallery::sharp_instance(1.0, 0.0, 0.0, 200);
  const auto z = gallery::sharp_zero_freeness(s, {0.1, 50.0, 0.0, 10.0});
  CHECK(z.window.count == 0);
  CHECK(z.min_abs_phi > 0.0);
}

TEST_CASE("flipping one sign creates zeros") {
  const auto s = gallery::sharp_instance(1.0, 0.0, 0.0, 200);
  const auto f = gallery::sharp_flipped(s, 3);
  CHECK(f.c[3] == -s.c[3]);
  CHECK(gallery::sharp_zero_freeness(f, {0.1, 50.0, 0.0, 10.0}).window.count > 0);
  CHECK(kind_of([&] { gallery::sharp_flipped(s, 200); }) == ErrorKind::BadParameters);
}

TEST_CASE("identity discrepancy falls with truncation") {
  const ComplexVec grid{{2.0, 1.0}, {10.0, 3.0}, {20.0, 0.5}};
  double prev = INFINITY;
  for (std::size_t n : {50U, 100U, 200U}) {
    const double d = gallery::sharp_identity_discrepancy(gallery::sharp_instance(1.0, 0.0, 0.0, n), grid);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("lacunary sequence") {
  RealVec t;
  for (int n = 1; n <= 2000; ++n) t.push_back(static_cast<double>(n));
  const auto r = gallery::lacunary_sequence(t, 3);
  REQUIRE(r.x.size() == 3);
  CHECK(r.x[0] == 2.0);
  CHECK(r.x[1] == 26.0);
  CHECK(r.witnesses[0] == 5.0);
  CHECK(r.inequalities_hold);
  CHECK(kind_of([&] { gallery::lacunary_sequence(t, 6); }) == ErrorKind::ExhaustedInput);
}

TEST_CASE("spectral gap hypotheses") {
  RealVec inv_sq, geometric;
  for (int n = 1; n <= 40; ++n) {
    inv_sq.push_back(1.0 / (n * n));
    geometric.push_back(std::exp2(-n));
  }
  CHECK(gallery::synthesis_gap_check(inv_sq, 4.0, 2.0).power_gap);
  const auto g = gallery::synthesis_gap_check(geometric, 1.0, 1.0);
  CHECK_FALSE(g.little_o);
  RealVec poly_seq;
  for (int n = 1; n <= 40; ++n) poly_seq.push_back(static_cast<double>(n * n));
  CHECK(gallery::synthesis_gap_check(poly_seq, 1.0, 1.0).little_o);
  CHECK(kind_of([&] { gallery::synthesis_gap_check(inv_sq, 1.0, 0.0); }) == ErrorKind::BadParameters);
  CHECK(kind_of([&] { gallery::synthesis_gap_check({1.0, 2.0}, 1.0, 1.0); }) == ErrorKind::BadParameters);
}

TEST_CASE("incompleteness pipeline in double at small K") {
  gallery::IncompletenessOptions o;
  o.k = 8;
  const auto p = gallery::incompleteness_build<double>(gallery::default_incompleteness_spectrum<double>(16), o);
  CHECK(p.n1.size() == 8);
  CHECK(p.residue_ok);
  CHECK(p.one_zero_per_gap);
  CHECK(p.s.size() + 1 == p.n1.size());
  for (std::size_t i = 0; i + 1 < p.n1.size(); ++i) {
    CHECK(p.s[i] > p.t[p.n1[i] - 1]);
    CHECK(p.s[i] < p.t[p.n1[i + 1] - 1]);
  }
  for (double v : p.nu) CHECK(v > 0.0);
}

TEST_CASE("incompleteness pipeline in multiprecision") {
  gallery::IncompletenessOptions o;
  o.k = 20;
  const auto p = gallery::incompleteness_build<gallery::Mp50>(gallery::default_incompleteness_spectrum<gallery::Mp50>(40), o);
  CHECK(p.all_ok());
  CHECK(p.max_residue_rel_err < 1e-8);
  CHECK(p.hermite_biehler);
  CHECK(p.sandwich_ok);
}

TEST_CASE("incompleteness pipeline input errors") {
  gallery::IncompletenessOptions o;
  o.k = 8;
  CHECK(kind_of([&] { gallery::incompleteness_build<double>({1.0, 2.0, 3.0}, o); }) == ErrorKind::BadParameters);
  CHECK(kind_of([&] { gallery::incompleteness_build<double>({3.0, 2.0, 1.0, 5.0}, o); }) == ErrorKind::BadParameters);
}
