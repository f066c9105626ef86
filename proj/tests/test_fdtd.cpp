#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "spcoh/diffraction.hpp"
#include "spcoh/fdtd.hpp"

using namespace spcoh;

namespace {

constexpr double kPi = std::numbers::pi;

SimGrid small_grid(bool periodic = true) {
  SimGrid grid;
  grid.cell = 0.03;
  grid.nx = 64;
  grid.ny = 96;
  grid.absorber_cells = 10;
  grid.periodic_x = periodic;
  return grid;
}

// Short Gaussian current burst at one Ex sample.
CurrentSource point_burst(int i, int j, double amplitude, double t0,
                          double tau) {
  return [=](FieldFrame& frame, double t, double dt) {
    const double u = (t - t0) / tau;
    frame.ex(i, j) -= dt * amplitude * std::exp(-0.5 * u * u);
  };
}

}  // namespace

TEST_CASE("null evolution: zero fields and sources stay zero") {
  Fdtd2d sim(small_grid());
  sim.run(50);
  CHECK(sim.field_energy() == 0.0);
}

TEST_CASE("doubling the source current doubles every field value") {
  auto run_with = [&](double amplitude) {
    Fdtd2d sim(small_grid());
    sim.add_source(point_burst(32, 48, amplitude, 0.3, 0.1));
    sim.run(120);
    return sim;
  };
  const auto base = run_with(1.0);
  const auto doubled = run_with(2.0);
  bool all_doubled = true;
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 96; ++j) {
      if (doubled.frame().ex(i, j) != 2.0 * base.frame().ex(i, j)) {
        all_doubled = false;
      }
      if (doubled.frame().hz(i, j) != 2.0 * base.frame().hz(i, j)) {
        all_doubled = false;
      }
    }
  }
  CHECK(all_doubled);
}

TEST_CASE("superposed sources give superposed fields") {
  auto s1 = point_burst(20, 40, 1.0, 0.3, 0.08);
  auto s2 = point_burst(44, 60, -0.7, 0.4, 0.12);
  Fdtd2d sim1(small_grid()), sim2(small_grid()), sim12(small_grid());
  sim1.add_source(s1);
  sim2.add_source(s2);
  sim12.add_source(s1);
  sim12.add_source(s2);
  sim1.run(150);
  sim2.run(150);
  sim12.run(150);

  double num = 0.0, den = 0.0;
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 96; ++j) {
      const double sum = sim1.frame().hz(i, j) + sim2.frame().hz(i, j);
      num += (sim12.frame().hz(i, j) - sum) * (sim12.frame().hz(i, j) - sum);
      den += sum * sum;
    }
  }
  CHECK(std::sqrt(num / den) < 1e-10);
}

TEST_CASE("absorbing boundary swallows a plane pulse") {
  SimGrid grid;
  grid.cell = 0.03;
  grid.nx = 48;
  grid.ny = 240;
  grid.absorber_cells = 12;
  grid.periodic_x = true;
  Fdtd2d sim(grid);

  // Plane pulse travelling in +y: Ex = -Hz = g(y), staggered in space and
  // time for a clean unidirectional launch.
  const double y0 = 0.5 * grid.ny * grid.cell;
  const double sigma = 0.25;
  const double dt = grid.dt();
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 1; j < grid.ny; ++j) {
      const double u = (double(j) * grid.cell - y0) / sigma;
      sim.frame().ex(i, j) = -std::exp(-0.5 * u * u);
    }
    for (int j = 0; j < grid.ny; ++j) {
      const double u =
          ((double(j) + 0.5) * grid.cell - y0 + 0.5 * dt) / sigma;
      sim.frame().add_hz(i, j, std::exp(-0.5 * u * u));
    }
  }
  const double incident = sim.field_energy();
  REQUIRE(incident > 0.0);

  // Conservation sanity while the pulse is still in vacuum.
  const int quarter = int(0.25 * grid.ny * grid.cell / dt);
  sim.run(quarter);
  CHECK(sim.field_energy() == doctest::Approx(incident).epsilon(0.02));

  // After crossing into the absorber (plus margin for the weak back lobe).
  sim.run(int(2.5 * grid.ny * grid.cell / dt));
  CHECK(sim.field_energy() / incident < 1e-3);
}

TEST_CASE("field energy stays bounded over 1e5 source-free steps") {
  SimGrid grid;
  grid.cell = 0.03;
  grid.nx = 32;
  grid.ny = 48;
  grid.absorber_cells = 10;
  grid.periodic_x = true;
  grid.courant = 0.99;
  Fdtd2d sim(grid);
  // Deterministic pseudo-random interior excitation.
  unsigned state = 12345;
  auto rnd = [&] {
    state = state * 1664525u + 1013904223u;
    return double(state >> 8) / double(1 << 24) - 0.5;
  };
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 14; j < grid.ny - 14; ++j) {
      sim.frame().ex(i, j) = rnd();
      sim.frame().add_hz(i, j, rnd());
    }
  }
  const double initial = sim.field_energy();
  sim.run(100000);
  CHECK(std::isfinite(sim.field_energy()));
  CHECK(sim.field_energy() <= initial * 1.01);
}

TEST_CASE("stability sentinel reports non-finite fields") {
  Fdtd2d sim(small_grid());
  sim.add_source([](FieldFrame& frame, double, double) {
    frame.ex(32, 48) += 1e308;  // drive straight into overflow
  });
  CHECK_THROWS_AS(sim.run(200), numeric_error);
}

TEST_CASE("grid validation") {
  SimGrid grid = small_grid();
  grid.courant = 1.2;
  CHECK_THROWS_AS([&] { Fdtd2d sim(grid); }(), domain_error);
  grid = small_grid();
  grid.absorber_cells = 4;
  CHECK_THROWS_AS([&] { Fdtd2d sim(grid); }(), domain_error);
}

TEST_CASE("point aperture radiates the 2D line-current field") {
  TransverseConfig config;
  config.aperture.fwhm = 0.0;  // single-cell source
  config.aperture.center = 0.0;
  config.aperture.wavelength = 0.6;
  config.domain_width = 20.0;
  config.monitor_height = 3.0;
  config.source_clearance = 3.0;
  config.cell = 0.025;
  config.absorber_cells = 16;
  config.periodic_x = false;
  config.steady_tolerance = 0.005;
  const auto line = run_transverse(config);

  // Analytic Ex of a time-harmonic line current J x from the 2D Helmholtz
  // Green's function: Ex ~ (y^2/rho^2) H0(k rho)
  //                        + ((x^2-y^2)/rho^2) H1(k rho)/(k rho).
  const double k = 2.0 * kPi / 0.6;
  const double y = line.height;
  std::vector<double> measured, reference;
  for (std::size_t i = 0; i < line.phasor.amplitude.size(); ++i) {
    const double x = line.phasor.coordinate(i);
    if (std::abs(x) > 3.5) continue;
    const double rho = std::hypot(x, y);
    REQUIRE(rho > 2.0 * 0.6);
    const std::complex<double> h0{std::cyl_bessel_j(0, k * rho),
                                  std::cyl_neumann(0, k * rho)};
    const std::complex<double> h1{std::cyl_bessel_j(1, k * rho),
                                  std::cyl_neumann(1, k * rho)};
    const std::complex<double> ex = (y * y / (rho * rho)) * h0 +
                                    ((x * x - y * y) / (rho * rho)) * h1 /
                                        (k * rho);
    measured.push_back(std::abs(line.phasor.amplitude[i]));
    reference.push_back(std::abs(ex));
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    num += measured[i] * reference[i];
    den += reference[i] * reference[i];
  }
  const double scale = num / den;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    CHECK(std::abs(measured[i] - scale * reference[i]) <=
          0.02 * scale * reference[i]);
  }
}

TEST_CASE("Gaussian aperture: far field of the monitor line has the analytic "
          "divergence") {
  TransverseConfig config;
  config.aperture.fwhm = 4.0;
  config.aperture.wavelength = 0.6;
  config.domain_width = 16.0;
  const auto line = run_transverse(config);
  CHECK(line.residual < config.steady_tolerance);

  const auto angles = make_angle_grid(0.35, 701);
  const auto spectrum = far_field(line.phasor, 100.0, angles);
  const auto report = divergence_metrics(spectrum);
  REQUIRE(report.fwhm.has_value());
  CHECK(*report.fwhm == doctest::Approx(0.0936420).epsilon(0.05));
}

TEST_CASE("translating the aperture translates the phasor exactly") {
  TransverseConfig config;
  config.aperture.fwhm = 1.0;
  config.aperture.wavelength = 0.6;
  config.domain_width = 16.0;
  const int shift_cells = 20;  // 0.6 um
  auto shifted = config;
  shifted.aperture.center = shift_cells * config.cell;

  const auto a = run_transverse(config);
  const auto b = run_transverse(shifted);
  REQUIRE(a.phasor.amplitude.size() == b.phasor.amplitude.size());
  const std::size_t n = a.phasor.amplitude.size();
  double peak = 0.0;
  for (const auto& u : a.phasor.amplitude) {
    peak = std::max(peak, std::abs(u));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + std::size_t(shift_cells)) % n;
    worst = std::max(worst,
                     std::abs(b.phasor.amplitude[j] - a.phasor.amplitude[i]));
  }
  CHECK(worst / peak < 1e-10);
}

TEST_CASE("non-converged steady state raises a convergence error") {
  TransverseConfig config;
  config.aperture.fwhm = 1.0;
  config.aperture.wavelength = 0.6;
  config.steady_tolerance = 1e-12;  // unreachable
  config.max_periods = 45;
  CHECK_THROWS_AS(run_transverse(config), convergence_error);
}

TEST_CASE("aperture profile must resolve the requested width") {
  TransverseConfig config;
  config.aperture.fwhm = 0.045;  // 1.5 cells: neither point nor resolved
  config.aperture.wavelength = 0.6;
  CHECK_THROWS_AS(run_transverse(config), domain_error);
}

TEST_CASE("longitudinal configuration validation") {
  LongitudinalConfig config;
  config.grating.period = 0.2;
  config.grating.total_length = 4.0;
  config.beam.speed = 0.3284;
  config.wavelengths = {0.45, 0.5, 0.55};
  config.polar_angles = {kPi / 2};
  config.clearance = 1.0;  // < 5 lambda_min
  CHECK_THROWS_AS(run_longitudinal(config), domain_error);

  config.clearance = 3.0;
  config.cell = 0.06;  // does not resolve lambda_min / 10
  CHECK_THROWS_AS(run_longitudinal(config), domain_error);

  config.cell = 0.005;
  config.wavelengths = {0.5};
  CHECK_THROWS_AS(run_longitudinal(config), domain_error);
}
