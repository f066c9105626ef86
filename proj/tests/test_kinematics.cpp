#include <cmath>
#include <numbers>

#include "doctest.h"
#include "spcoh/kinematics.hpp"

using namespace spcoh;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("beta_from_energy matches closed-form evaluations") {
  CHECK(beta_from_energy(0.0).beta == 0.0);
  CHECK(beta_from_energy(0.0).gamma == 1.0);

  const auto sem = beta_from_energy(30.0);
  CHECK(std::abs(sem.beta - 0.3284) < 1e-4);
  CHECK(sem.beta == doctest::Approx(0.328376161618).epsilon(1e-9));

  // gamma = 2 special case: E equals the rest energy.
  const auto rest = beta_from_energy(510.999);
  CHECK(std::abs(rest.beta - 0.86603) < 1e-5);
  CHECK(rest.gamma == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("beta_from_energy invariants") {
  double previous = -1.0;
  for (double e : {0.0, 1.0, 5.0, 30.0, 100.0, 511.0, 3000.0}) {
    const auto k = beta_from_energy(e);
    CHECK(k.beta >= 0.0);
    CHECK(k.beta < 1.0);
    CHECK(k.gamma >= 1.0);
    CHECK(std::abs(k.gamma * std::sqrt(1.0 - k.beta * k.beta) - 1.0) < 1e-12);
    CHECK(k.beta > previous);
    previous = k.beta;
  }
  CHECK_THROWS_AS(beta_from_energy(-1.0), domain_error);
}

TEST_CASE("smith_purcell_wavelength reproduces the dispersion relation") {
  GratingSpec grating;
  grating.period = 0.2;
  grating.total_length = 4.0;

  const double beta30 = beta_from_energy(30.0).beta;
  const double lambda90 = smith_purcell_wavelength(grating, beta30, kPi / 2, 1);
  CHECK(std::abs(lambda90 - 0.609) < 1e-3);
  // Consistent with the 600 nm design point within 2%.
  CHECK(std::abs(lambda90 / 0.6 - 1.0) < 0.02);

  for (double beta : {0.1, 0.3284, 0.7, 0.95}) {
    CHECK(smith_purcell_wavelength(grating, beta, kPi / 2, 1) ==
          doctest::Approx(grating.period / beta).epsilon(1e-14));
  }
  CHECK(smith_purcell_wavelength(grating, 0.5, 0.0, 1) ==
        doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("smith_purcell_wavelength monotonicity") {
  GratingSpec grating;
  grating.period = 0.2;
  grating.total_length = 4.0;
  const double beta = 0.4;

  // Strictly decreasing in cos(theta), i.e. increasing with theta.
  double previous = 0.0;
  for (double theta : {0.2, 0.8, 1.4, 2.0, 2.6}) {
    const double lambda = smith_purcell_wavelength(grating, beta, theta, 1);
    CHECK(lambda > previous);
    previous = lambda;
  }

  for (int n = 1; n < 5; ++n) {
    CHECK(smith_purcell_wavelength(grating, beta, 1.0, n + 1) <
          smith_purcell_wavelength(grating, beta, 1.0, n));
  }
  CHECK(smith_purcell_wavelength(grating, 0.5, 1.0, 1) >
        smith_purcell_wavelength(grating, 0.6, 1.0, 1));

  CHECK_THROWS_AS(smith_purcell_wavelength(grating, 0.0, 1.0, 1), domain_error);
  CHECK_THROWS_AS(smith_purcell_wavelength(grating, 1.0, 1.0, 1), domain_error);
  CHECK_THROWS_AS(smith_purcell_wavelength(grating, 0.5, 1.0, 0), domain_error);
}

TEST_CASE("fraunhofer_distance reproduces the quoted values") {
  CHECK(fraunhofer_distance(4.0, 0.6) == doctest::Approx(26.667).epsilon(0.01));
  CHECK(fraunhofer_distance(20.0, 0.6) ==
        doctest::Approx(666.67).epsilon(0.01));
  CHECK(fraunhofer_distance(5.0, 0.5) == doctest::Approx(50.0).epsilon(0.01));

  // Quadratic scaling is exact.
  for (double d : {0.3, 1.7, 12.0}) {
    CHECK(fraunhofer_distance(2.0 * d, 0.5) ==
          4.0 * fraunhofer_distance(d, 0.5));
  }
  CHECK_THROWS_AS(fraunhofer_distance(0.0, 0.5), domain_error);
  CHECK_THROWS_AS(fraunhofer_distance(1.0, -0.5), domain_error);
}

TEST_CASE("regime_check classifies the reported measurement geometries") {
  SUBCASE("TEM-scale geometry, wide beam") {
    const auto report = regime_check(250000.0, 33.0, 2000.0, 0.5);
    CHECK(report.fraunhofer_distance_coherent ==
          doctest::Approx(2178.0).epsilon(0.01));
    CHECK(report.is_far_field_coherent);
    CHECK_FALSE(report.is_far_field_beam);
    const auto strict = regime_check(250000.0, 33.0, 2000.0, 0.5, 10.0);
    CHECK(strict.is_far_field_coherent);
    CHECK_FALSE(strict.is_far_field_beam);
    CHECK(report.parallax_ratio == doctest::Approx(2000.0 / 250000.0));
  }
  SUBCASE("scaled-down SEM geometry") {
    const auto report = regime_check(100.0, 4.0, 20.0, 0.6);
    CHECK(report.is_far_field_coherent);
    CHECK_FALSE(report.is_far_field_beam);
  }
  SUBCASE("asymptotic far field") {
    const auto report = regime_check(1e12, 4.0, 20.0, 0.6);
    CHECK(report.is_far_field_coherent);
    CHECK(report.is_far_field_beam);
    CHECK(report.parallax_ratio < 1e-9);
  }
  SUBCASE("coherence cell larger than the beam is rejected") {
    CHECK_THROWS_AS(regime_check(100.0, 21.0, 20.0, 0.6), domain_error);
  }
}

TEST_CASE("grating spec invariants") {
  GratingSpec grating;
  grating.period = 0.2;
  grating.total_length = 4.0;
  grating.validate();
  CHECK(grating.tooth_count() == 20);
  CHECK(std::abs(grating.grating_momentum() - 2.0 * kPi / 0.2) <
        1e-12 * grating.grating_momentum());

  GratingSpec bad = grating;
  bad.total_length = 4.09;
  CHECK_THROWS_AS(bad.validate(), domain_error);
  bad = grating;
  bad.duty_cycle = 1.0;
  CHECK_THROWS_AS(bad.validate(), domain_error);
}
