// Exercises the shared-library C interface end to end.

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "spcoh.h"

namespace {
constexpr double kPi = std::numbers::pi;

spcoh_transverse_config default_transverse() {
  spcoh_transverse_config c{};
  c.aperture_fwhm_um = 1.0;
  c.aperture_center_um = 0.0;
  c.lambda_um = 0.6;
  c.ramp_periods = 10.0;
  c.domain_width_um = 16.0;
  c.monitor_height_um = 3.0;
  c.source_clearance_um = 3.0;
  c.cell_um = 0.03;
  c.courant = 0.99;
  c.absorber_cells = 12;
  c.periodic_x = 1;
  c.min_settle_periods = 20;
  c.max_periods = 400;
  c.steady_tolerance = 0.01;
  return c;
}
}  // namespace

TEST_CASE("C API: kinematics round trip and error reporting") {
  double beta = 0.0, gamma = 0.0;
  REQUIRE(spcoh_beta_from_energy(30.0, &beta, &gamma) == SPCOH_OK);
  CHECK(std::abs(beta - 0.3284) < 1e-4);

  CHECK(spcoh_beta_from_energy(-2.0, &beta, &gamma) == SPCOH_ERR_INVALID);
  CHECK(std::strlen(spcoh_error_message()) > 0);

  double lambda = 0.0;
  REQUIRE(spcoh_smith_purcell_wavelength(0.2, beta, kPi / 2, 1, &lambda) ==
          SPCOH_OK);
  CHECK(lambda == doctest::Approx(0.609).epsilon(0.005));

  double d = 0.0;
  REQUIRE(spcoh_fraunhofer_distance(4.0, 0.6, &d) == SPCOH_OK);
  CHECK(d == doctest::Approx(26.667).epsilon(1e-3));

  spcoh_regime_report report{};
  REQUIRE(spcoh_regime_check(100.0, 4.0, 20.0, 0.6, 1.0, &report) == SPCOH_OK);
  CHECK(report.is_far_field_coherent == 1);
  CHECK(report.is_far_field_beam == 0);
  CHECK(spcoh_regime_check(100.0, 30.0, 20.0, 0.6, 1.0, &report) ==
        SPCOH_ERR_INVALID);
}

TEST_CASE("C API: field creation, propagation, far field, metrics") {
  spcoh_field* aperture = nullptr;
  REQUIRE(spcoh_field_gaussian_aperture(4.0, 0.0, 60.0, 1024, 0.6,
                                        &aperture) == SPCOH_OK);
  REQUIRE(aperture != nullptr);
  CHECK(spcoh_field_size(aperture) == 1024);

  spcoh_field* moved = nullptr;
  REQUIRE(spcoh_propagate(aperture, 100.0, &moved) == SPCOH_OK);
  double x0 = 0, dx = 0, lambda = 0, z = 0;
  REQUIRE(spcoh_field_info(moved, &x0, &dx, &lambda, &z) == SPCOH_OK);
  CHECK(z == doctest::Approx(100.0));

  std::vector<double> angles;
  for (int i = 0; i < 601; ++i) angles.push_back(-0.3 + 0.6 * i / 600.0);
  spcoh_curve* spectrum = nullptr;
  REQUIRE(spcoh_far_field(aperture, 100.0, angles.data(), angles.size(),
                          &spectrum) == SPCOH_OK);
  CHECK(spcoh_curve_size(spectrum) == angles.size());

  spcoh_divergence metrics{};
  REQUIRE(spcoh_divergence_metrics(spectrum, &metrics) == SPCOH_OK);
  CHECK(metrics.has_fwhm == 1);
  CHECK(metrics.fwhm == doctest::Approx(0.09364).epsilon(0.01));

  spcoh_curve_destroy(spectrum);
  spcoh_field_destroy(moved);
  spcoh_field_destroy(aperture);
}

TEST_CASE("C API: round trip of raw field samples") {
  std::vector<double> re(128), im(128);
  for (int i = 0; i < 128; ++i) {
    re[i] = std::cos(0.1 * i);
    im[i] = std::sin(0.1 * i);
  }
  spcoh_field* field = nullptr;
  REQUIRE(spcoh_field_create(re.size(), -4.0, 0.0625, 0.6, 0.0, re.data(),
                             im.data(), &field) == SPCOH_OK);
  std::vector<double> re2(128), im2(128);
  REQUIRE(spcoh_field_samples(field, re2.data(), im2.data()) == SPCOH_OK);
  CHECK(re2 == re);
  CHECK(im2 == im);
  spcoh_field_destroy(field);

  // Sampling coarser than lambda/8 must be rejected.
  CHECK(spcoh_field_create(re.size(), -4.0, 0.09, 0.6, 0.0, re.data(),
                           im.data(), &field) == SPCOH_ERR_INVALID);
}

TEST_CASE("C API: transverse scene and ensemble patterns") {
  const spcoh_transverse_config scene = default_transverse();
  spcoh_field* line = nullptr;
  double residual = 1.0;
  REQUIRE(spcoh_run_transverse(&scene, &line, &residual) == SPCOH_OK);
  CHECK(residual < 0.01);
  CHECK(spcoh_field_size(line) > 0);
  spcoh_field_destroy(line);

  spcoh_ensemble_config ensemble{};
  ensemble.w_beam_um = 20.0;
  ensemble.l_c_um = 4.0;
  ensemble.lambda_um = 0.6;
  ensemble.radius_um = 100.0;
  ensemble.emitters_per_cell = 1;
  ensemble.emitter_fwhm_um = 0.3;
  ensemble.engine = SPCOH_ENGINE_SCALAR;
  ensemble.fdtd = scene;

  std::vector<double> angles;
  for (int i = 0; i < 801; ++i) angles.push_back(-1.2 + 2.4 * i / 800.0);

  spcoh_curve* semi = nullptr;
  REQUIRE(spcoh_model_pattern(&ensemble, SPCOH_MODEL_SEMICLASSICAL,
                              angles.data(), angles.size(), &semi) == SPCOH_OK);
  spcoh_divergence dsemi{};
  REQUIRE(spcoh_divergence_metrics(semi, &dsemi) == SPCOH_OK);
  CHECK(dsemi.has_fwhm == 1);
  CHECK(dsemi.fwhm == doctest::Approx(0.0936).epsilon(0.02));
  spcoh_curve_destroy(semi);

  const double sweep[3] = {1.0, 2.0, 4.0};
  spcoh_comparison* comparison = nullptr;
  REQUIRE(spcoh_compare_models(&ensemble, sweep, 3, angles.data(),
                               angles.size(), &comparison) == SPCOH_OK);
  CHECK(spcoh_comparison_row_count(comparison) == 6);
  int has_fit = 0;
  double exponent = 0.0;
  REQUIRE(spcoh_comparison_fit(comparison, SPCOH_MODEL_SEMICLASSICAL, &has_fit,
                               &exponent) == SPCOH_OK);
  CHECK(has_fit == 1);
  CHECK(exponent == doctest::Approx(-1.0).epsilon(0.15));
  spcoh_comparison_destroy(comparison);
}

TEST_CASE("C API: entanglement model") {
  const double momenta[2] = {-1.0, 1.0};
  const double amp_re[2] = {1.0, 1.0};
  spcoh_electron_state state{};
  state.n = 2;
  state.momenta = momenta;
  state.amp_re = amp_re;
  state.amp_im = nullptr;
  state.momentum_spread = 1e4;
  state.drift_area = kPi;

  spcoh_amplitudes* amplitudes = nullptr;
  REQUIRE(spcoh_build_amplitudes(&state, 1.5, 385, 10.0, &amplitudes) ==
          SPCOH_OK);
  const size_t nk = spcoh_amplitudes_kf_count(amplitudes);
  REQUIRE(nk > 0);
  std::vector<double> kf(nk);
  REQUIRE(spcoh_amplitudes_kf_grid(amplitudes, kf.data()) == SPCOH_OK);

  // Central final momentum (closest to kappa + mean k = 10).
  size_t best = 0;
  for (size_t j = 1; j < nk; ++j) {
    if (std::abs(kf[j] - 10.0) < std::abs(kf[best] - 10.0)) best = j;
  }
  spcoh_curve* coincidence = nullptr;
  REQUIRE(spcoh_coincidence_pattern(amplitudes, kf[best], &coincidence) ==
          SPCOH_OK);
  std::vector<double> q(spcoh_curve_size(coincidence)),
      p(spcoh_curve_size(coincidence));
  REQUIRE(spcoh_curve_data(coincidence, q.data(), p.data()) == SPCOH_OK);
  double vis = 0.0;
  REQUIRE(spcoh_visibility(p.data(), p.size(), &vis) == SPCOH_OK);
  CHECK(vis == doctest::Approx(1.0).epsilon(1e-6));
  spcoh_curve_destroy(coincidence);

  spcoh_curve* traced = nullptr;
  REQUIRE(spcoh_traced_pattern(amplitudes, &traced) == SPCOH_OK);
  std::vector<double> pt(spcoh_curve_size(traced));
  REQUIRE(spcoh_curve_data(traced, nullptr, pt.data()) == SPCOH_OK);
  REQUIRE(spcoh_visibility(pt.data(), pt.size(), &vis) == SPCOH_OK);
  CHECK(vis == doctest::Approx(1.0).epsilon(1e-4));  // sigma_k >> dk
  spcoh_curve_destroy(traced);
  spcoh_amplitudes_destroy(amplitudes);
}
