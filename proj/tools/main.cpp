// spcoh command-line runner. All physics goes through the shared-library C
// interface; this tool only assembles configurations and writes CSV/PNG
// artifacts. Exit codes: 0 success, 1 validation error, 2 numerical failure.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "plot.hpp"
#include "spcoh.h"

namespace {

using spcli::CsvTable;
using spcli::PlotSeries;
using spcli::PlotSpec;
using spcli::RunConfig;

constexpr double kPi = std::numbers::pi;

constexpr std::uint32_t kPalette[] = {0x1f77b4, 0xd62728, 0x2ca02c,
                                      0x9467bd, 0xff7f0e, 0x8c564b};

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) {
  throw CliError{code, message};
}

void check(spcoh_status status) {
  if (status == SPCOH_OK) return;
  fail(status == SPCOH_ERR_INVALID ? 1 : 2, spcoh_error_message());
}

std::string output_path(const RunConfig& config, const std::string& sub,
                        const std::string& stem, const std::string& ext) {
  namespace fs = std::filesystem;
  return (fs::path(config.outdir) / sub / (stem + ext)).string();
}

std::string stem_for(const RunConfig& config, const std::string& sub) {
  return config.name.empty() ? sub : config.name;
}

std::string format_lc(double lc) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", lc);
  std::string s = buf;
  for (auto& c : s) {
    if (c == '.') c = 'p';
  }
  return s;
}

std::vector<double> angle_grid(const RunConfig& config, bool with_quantum) {
  double span = config.phi_max_rad;
  if (span <= 0.0) {
    const double lambda = config.lambda_nm * 1e-3;
    const double lc_min =
        *std::min_element(config.l_c_um.begin(), config.l_c_um.end());
    span = 1.5 * 0.624 * lambda / lc_min;
    if (with_quantum) span = std::max(span, 1.45);
    span = std::min(span, 1.45);
  }
  std::vector<double> grid(std::size_t(config.n_phi));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = -span + 2.0 * span * double(i) / double(grid.size() - 1);
  }
  return grid;
}

spcoh_transverse_config transverse_from(const RunConfig& config) {
  spcoh_transverse_config scene{};
  scene.aperture_fwhm_um = 1.0;
  scene.aperture_center_um = 0.0;
  scene.lambda_um = config.lambda_nm * 1e-3;
  scene.ramp_periods = config.ramp_periods;
  scene.domain_width_um = config.w_beam_um + 8.0;
  scene.monitor_height_um = config.monitor_height_um;
  scene.source_clearance_um = 3.0;
  scene.cell_um = (config.cell_nm > 0.0 ? config.cell_nm : 30.0) * 1e-3;
  scene.courant = config.courant;
  scene.absorber_cells = config.absorber_cells > 0 ? config.absorber_cells : 12;
  scene.periodic_x = 1;
  scene.min_settle_periods = config.steady_periods;
  scene.max_periods = config.max_periods;
  scene.steady_tolerance = config.steady_tol;
  return scene;
}

spcoh_ensemble_config ensemble_from(const RunConfig& config) {
  spcoh_ensemble_config e{};
  e.w_beam_um = config.w_beam_um;
  e.lambda_um = config.lambda_nm * 1e-3;
  e.radius_um = config.r_um;
  e.emitters_per_cell = config.emitters_per_cell;
  e.emitter_fwhm_um = config.emitter_size_nm * 1e-3;
  e.sampled_placement = config.placement == "sampled" ? 1 : 0;
  e.seed = config.seed;
  e.engine =
      config.engine == "fdtd" ? SPCOH_ENGINE_FDTD : SPCOH_ENGINE_SCALAR;
  e.fdtd = transverse_from(config);
  return e;
}

spcoh_model model_from(const RunConfig& config) {
  if (config.model == "quantum") return SPCOH_MODEL_QUANTUM_POINT;
  if (config.model == "semiclassical") return SPCOH_MODEL_SEMICLASSICAL;
  fail(1, "model must be 'semiclassical' or 'quantum', got '" + config.model +
              "'");
}

struct Curve {
  std::vector<double> x, y;
};

Curve take_curve(spcoh_curve* handle) {
  Curve curve;
  curve.x.resize(spcoh_curve_size(handle));
  curve.y.resize(spcoh_curve_size(handle));
  check(spcoh_curve_data(handle, curve.x.data(), curve.y.data()));
  spcoh_curve_destroy(handle);
  return curve;
}

// ---------------------------------------------------------------- regimes --

int run_regimes(const RunConfig& config) {
  const double lambda = config.lambda_nm * 1e-3;
  CsvTable table;
  table.columns = {"r_um",      "l_c_um", "w_beam_um", "lambda_um", "F_lc_um",
                   "F_beam_um", "far_lc", "far_beam",  "parallax"};
  std::printf("regime report (threshold factor %g, strict factor 10)\n",
              config.fraunhofer_factor);
  for (double lc : config.l_c_um) {
    spcoh_regime_report report{};
    check(spcoh_regime_check(config.r_um, lc, config.w_beam_um, lambda,
                             config.fraunhofer_factor, &report));
    spcoh_regime_report strict{};
    check(spcoh_regime_check(config.r_um, lc, config.w_beam_um, lambda, 10.0,
                             &strict));
    table.rows.push_back({config.r_um, lc, config.w_beam_um, lambda,
                          report.fraunhofer_distance_coherent,
                          report.fraunhofer_distance_beam,
                          double(report.is_far_field_coherent),
                          double(report.is_far_field_beam),
                          report.parallax_ratio});
    std::printf(
        "  l_c=%7.3f um: F_lc=%.4g um, F_beam=%.4g um, far(lc)=%s "
        "far(beam)=%s [x10: %s/%s] parallax=%.3g\n",
        lc, report.fraunhofer_distance_coherent,
        report.fraunhofer_distance_beam,
        report.is_far_field_coherent ? "yes" : "no",
        report.is_far_field_beam ? "yes" : "no",
        strict.is_far_field_coherent ? "yes" : "no",
        strict.is_far_field_beam ? "yes" : "no", report.parallax_ratio);
  }
  const std::string stem = stem_for(config, "regimes");
  spcli::write_csv(output_path(config, "regimes", stem, ".csv"), "regimes",
                   config, table);
  std::printf("wrote %s\n",
              output_path(config, "regimes", stem, ".csv").c_str());
  return 0;
}

// ------------------------------------------------------------ sp-spectrum --

int run_sp_spectrum(const RunConfig& config) {
  double beta = 0.0, gamma = 0.0;
  check(spcoh_beta_from_energy(config.e_kev, &beta, &gamma));

  spcoh_longitudinal_config scene{};
  scene.grating.period_um = config.grating_period_nm * 1e-3;
  scene.grating.total_length_um = config.grating_length_um;
  scene.grating.tooth_height_um = config.tooth_height_nm * 1e-3;
  scene.grating.duty_cycle = config.duty_cycle;
  scene.charge = 1.0;
  scene.speed = beta;
  scene.height_above_grating_um = config.beam_height_nm * 1e-3;
  scene.smoothing_radius_cells = 2.0;
  scene.cell_um = (config.cell_nm > 0.0 ? config.cell_nm : 5.0) * 1e-3;
  scene.courant = config.courant;
  scene.absorber_cells = config.absorber_cells > 0 ? config.absorber_cells : 16;
  scene.clearance_um = 3.0;
  scene.monitor_height_um = 2.0;
  scene.space_above_monitor_um = 1.0;
  scene.ramp_travel_um = 1.5;

  if (config.lambda_band_nm.size() != 2 || config.n_lambda < 2) {
    fail(1, "lambda_band_nm must have two entries and n_lambda >= 2");
  }
  std::vector<double> wavelengths(std::size_t(config.n_lambda));
  for (std::size_t i = 0; i < wavelengths.size(); ++i) {
    wavelengths[i] = 1e-3 * (config.lambda_band_nm[0] +
                             (config.lambda_band_nm[1] -
                              config.lambda_band_nm[0]) *
                                 double(i) / double(wavelengths.size() - 1));
  }
  std::vector<double> angles;
  for (double deg : config.theta_deg) angles.push_back(deg * kPi / 180.0);

  spcoh_spectra* spectra = nullptr;
  check(spcoh_run_longitudinal(&scene, wavelengths.data(), wavelengths.size(),
                               angles.data(), angles.size(), &spectra));

  const std::string stem = stem_for(config, "sp-spectrum");
  PlotSpec plotspec;
  plotspec.title = "radiated spectrum per polar angle";
  plotspec.x_label = "wavelength (nm)";
  plotspec.y_label = "power";
  for (std::size_t a = 0; a < angles.size(); ++a) {
    std::vector<double> w(wavelengths.size()), p(wavelengths.size());
    check(spcoh_spectra_row(spectra, a, w.data(), p.data()));
    CsvTable table;
    table.columns = {"wavelength_nm", "power"};
    for (std::size_t i = 0; i < w.size(); ++i) {
      table.rows.push_back({w[i] * 1e3, p[i]});
    }
    char suffix[48];
    std::snprintf(suffix, sizeof suffix, "_theta%g", config.theta_deg[a]);
    spcli::write_csv(output_path(config, "sp-spectrum", stem + suffix, ".csv"),
                     "sp-spectrum", config, table);

    double peak = 0.0, predicted = 0.0;
    check(spcoh_spectra_peak(spectra, a, &peak));
    check(spcoh_smith_purcell_wavelength(scene.grating.period_um, beta,
                                         angles[a], 1, &predicted));
    std::printf("theta=%6.1f deg: peak %7.2f nm, grating equation %7.2f nm "
                "(%+.2f%%)\n",
                config.theta_deg[a], peak * 1e3, predicted * 1e3,
                100.0 * (peak / predicted - 1.0));
    if (config.plot) {
      PlotSeries series;
      char label[32];
      std::snprintf(label, sizeof label, "theta %g", config.theta_deg[a]);
      series.label = label;
      series.color = kPalette[a % 6];
      for (std::size_t i = 0; i < w.size(); ++i) {
        series.x.push_back(w[i] * 1e3);
        series.y.push_back(p[i]);
      }
      plotspec.series.push_back(std::move(series));
    }
  }
  spcoh_spectra_destroy(spectra);
  if (config.plot) {
    spcli::write_plot_png(output_path(config, "sp-spectrum", stem, ".png"),
                          plotspec);
  }
  return 0;
}

// ----------------------------------------------- divergence / compare / 1c --

Curve model_pattern(const RunConfig& config, spcoh_model model, double lc,
                    const std::vector<double>& angles) {
  spcoh_ensemble_config e = ensemble_from(config);
  e.l_c_um = lc;
  spcoh_curve* pattern = nullptr;
  check(spcoh_model_pattern(&e, model, angles.data(), angles.size(),
                            &pattern));
  return take_curve(pattern);
}

spcoh_divergence pattern_metrics(const RunConfig& config, spcoh_model model,
                                 double lc, const std::vector<double>& angles) {
  spcoh_ensemble_config e = ensemble_from(config);
  e.l_c_um = lc;
  spcoh_curve* handle = nullptr;
  check(spcoh_model_pattern(&e, model, angles.data(), angles.size(), &handle));
  spcoh_divergence report{};
  check(spcoh_divergence_metrics(handle, &report));
  spcoh_curve_destroy(handle);
  return report;
}

int run_divergence(const RunConfig& config) {
  const auto model = model_from(config);
  const auto angles = angle_grid(config, model == SPCOH_MODEL_QUANTUM_POINT);
  const std::string stem = stem_for(config, "divergence");

  CsvTable metrics;
  metrics.columns = {"l_c_um", "fwhm_rad", "rms_rad"};
  PlotSpec plotspec;
  plotspec.title = "divergence vs coherence length (" + config.model + ")";
  plotspec.x_label = "phi (rad)";
  plotspec.y_label = "intensity";

  for (std::size_t i = 0; i < config.l_c_um.size(); ++i) {
    const double lc = config.l_c_um[i];
    const Curve pattern = model_pattern(config, model, lc, angles);

    CsvTable table;
    table.columns = {"phi_rad", "intensity"};
    for (std::size_t j = 0; j < pattern.x.size(); ++j) {
      table.rows.push_back({pattern.x[j], pattern.y[j]});
    }
    spcli::write_csv(
        output_path(config, "divergence", stem + "_lc" + format_lc(lc),
                    ".csv"),
        "divergence", config, table);

    const spcoh_divergence report = pattern_metrics(config, model, lc, angles);
    metrics.rows.push_back(
        {lc, report.has_fwhm ? report.fwhm : std::nan(""), report.rms_width});
    std::printf("l_c=%7.3f um: FWHM %s rad, RMS %.5g rad\n", lc,
                report.has_fwhm ? std::to_string(report.fwhm).c_str()
                                : "undefined",
                report.rms_width);

    if (config.engine == "fdtd") {
      spcoh_transverse_config scene = transverse_from(config);
      scene.aperture_fwhm_um = lc;
      spcoh_field* line = nullptr;
      double residual = 0.0;
      check(spcoh_run_transverse(&scene, &line, &residual));
      const std::size_t n = spcoh_field_size(line);
      std::vector<double> re(n), im(n);
      double x0 = 0, dx = 0, lam = 0, z = 0;
      check(spcoh_field_samples(line, re.data(), im.data()));
      check(spcoh_field_info(line, &x0, &dx, &lam, &z));
      spcoh_field_destroy(line);
      CsvTable nf;
      nf.columns = {"x_um", "re", "im"};
      for (std::size_t j = 0; j < n; ++j) {
        nf.rows.push_back({x0 + dx * double(j), re[j], im[j]});
      }
      spcli::write_csv(output_path(config, "divergence",
                                   stem + "_nearfield_lc" + format_lc(lc),
                                   ".csv"),
                       "divergence", config, nf);
    }

    PlotSeries series;
    series.label = "l_c=" + format_lc(lc);
    series.color = kPalette[i % 6];
    series.x = pattern.x;
    series.y = pattern.y;
    plotspec.series.push_back(std::move(series));
  }
  spcli::write_csv(output_path(config, "divergence", stem + "_metrics", ".csv"),
                   "divergence", config, metrics);
  if (config.plot) {
    spcli::write_plot_png(output_path(config, "divergence", stem, ".png"),
                          plotspec);
  }
  return 0;
}

int run_compare(const RunConfig& config) {
  if (config.l_c_um.size() < 2) {
    fail(1, "compare requires at least two coherence lengths in l_c_um");
  }
  const auto angles = angle_grid(config, true);
  const spcoh_ensemble_config e = ensemble_from(config);

  spcoh_comparison* comparison = nullptr;
  check(spcoh_compare_models(&e, config.l_c_um.data(), config.l_c_um.size(),
                             angles.data(), angles.size(), &comparison));

  CsvTable table;
  table.columns = {"model", "l_c_um", "fwhm_rad", "rms_rad"};
  for (std::size_t i = 0; i < spcoh_comparison_row_count(comparison); ++i) {
    spcoh_comparison_row row{};
    check(spcoh_comparison_get_row(comparison, i, &row));
    table.rows.push_back({double(row.model), row.l_c_um,
                          row.has_fwhm ? row.fwhm_rad : std::nan(""),
                          row.rms_rad});
    std::printf("  %-13s l_c=%7.3f um  fwhm=%s rad  rms=%.5g rad\n",
                row.model == SPCOH_MODEL_SEMICLASSICAL ? "semiclassical"
                                                       : "quantum",
                row.l_c_um,
                row.has_fwhm ? std::to_string(row.fwhm_rad).c_str() : "undef",
                row.rms_rad);
  }
  for (auto model : {SPCOH_MODEL_SEMICLASSICAL, SPCOH_MODEL_QUANTUM_POINT}) {
    int has_fit = 0;
    double exponent = 0.0;
    check(spcoh_comparison_fit(comparison, model, &has_fit, &exponent));
    std::printf("%s scaling exponent s (FWHM ~ l_c^s): %s\n",
                model == SPCOH_MODEL_SEMICLASSICAL ? "semiclassical"
                                                   : "quantum",
                has_fit ? std::to_string(exponent).c_str() : "undefined");
  }
  spcoh_comparison_destroy(comparison);

  const std::string stem = stem_for(config, "compare");
  spcli::write_csv(output_path(config, "compare", stem, ".csv"), "compare",
                   config, table);

  if (config.plot) {
    PlotSpec plotspec;
    plotspec.title = "semiclassical vs quantum angular patterns";
    plotspec.x_label = "phi (rad)";
    plotspec.y_label = "intensity";
    for (std::size_t i = 0; i < config.l_c_um.size(); ++i) {
      PlotSeries series;
      series.label = "semi l_c=" + format_lc(config.l_c_um[i]);
      series.color = kPalette[i % 6];
      const Curve c = model_pattern(config, SPCOH_MODEL_SEMICLASSICAL,
                                    config.l_c_um[i], angles);
      series.x = c.x;
      series.y = c.y;
      plotspec.series.push_back(std::move(series));
    }
    PlotSeries quantum;
    quantum.label = "quantum (any l_c)";
    quantum.color = 0x000000;
    const Curve c = model_pattern(config, SPCOH_MODEL_QUANTUM_POINT,
                                  config.l_c_um[0], angles);
    quantum.x = c.x;
    quantum.y = c.y;
    plotspec.series.push_back(std::move(quantum));
    spcli::write_plot_png(output_path(config, "compare", stem, ".png"),
                          plotspec);
  }
  return 0;
}

int run_fig1c(const RunConfig& config) {
  const auto angles = angle_grid(config, false);
  const std::string stem = stem_for(config, "reproduce-fig1c");

  CsvTable table;
  table.columns = {"phi_rad"};
  std::vector<Curve> curves;
  for (double lc : config.l_c_um) {
    table.columns.push_back("intensity_lc" + format_lc(lc));
    curves.push_back(
        model_pattern(config, SPCOH_MODEL_SEMICLASSICAL, lc, angles));
  }
  for (std::size_t j = 0; j < angles.size(); ++j) {
    std::vector<double> row = {angles[j]};
    for (const auto& c : curves) row.push_back(c.y[j]);
    table.rows.push_back(std::move(row));
  }
  spcli::write_csv(output_path(config, "reproduce-fig1c", stem, ".csv"),
                   "reproduce-fig1c", config, table);

  std::printf("semiclassical divergence at r=%g um, lambda=%g nm:\n",
              config.r_um, config.lambda_nm);
  double previous = 0.0;
  bool decreasing = true;
  for (std::size_t i = 0; i < config.l_c_um.size(); ++i) {
    const spcoh_divergence report = pattern_metrics(
        config, SPCOH_MODEL_SEMICLASSICAL, config.l_c_um[i], angles);
    std::printf("  l_c=%7.3f um -> FWHM %s rad\n", config.l_c_um[i],
                report.has_fwhm ? std::to_string(report.fwhm).c_str()
                                : "undefined");
    if (i > 0 && report.has_fwhm && report.fwhm >= previous) {
      decreasing = false;
    }
    previous = report.has_fwhm ? report.fwhm : previous;
  }
  std::printf("divergence decreases with l_c: %s\n", decreasing ? "yes" : "NO");

  if (config.plot) {
    PlotSpec plotspec;
    plotspec.title = "angular spectrum per coherence length";
    plotspec.x_label = "phi (rad)";
    plotspec.y_label = "intensity";
    for (std::size_t i = 0; i < curves.size(); ++i) {
      PlotSeries series;
      series.label = "l_c=" + format_lc(config.l_c_um[i]);
      series.color = kPalette[i % 6];
      series.x = curves[i].x;
      series.y = curves[i].y;
      plotspec.series.push_back(std::move(series));
    }
    spcli::write_plot_png(output_path(config, "reproduce-fig1c", stem, ".png"),
                          plotspec);
  }
  return 0;
}

// -------------------------------------------------------------- postselect --

int run_postselect(const RunConfig& config) {
  const auto& k = config.k_components_um;
  if (config.amp_re.size() != k.size() ||
      (config.amp_im.size() != k.size() && !config.amp_im.empty())) {
    fail(1, "amp_re/amp_im must match k_components_um in length");
  }
  spcoh_electron_state state{};
  state.n = k.size();
  state.momenta = k.data();
  state.amp_re = config.amp_re.data();
  state.amp_im = config.amp_im.empty() ? nullptr : config.amp_im.data();
  state.momentum_spread = config.sigma_k_um;
  state.drift_area = config.drift_area_um2;

  spcoh_amplitudes* amplitudes = nullptr;
  check(spcoh_build_amplitudes(&state, config.q_half_span_um,
                               std::size_t(config.n_q), config.kappa_um,
                               &amplitudes));

  // Post-select the central final momentum.
  double k_mean = 0.0;
  for (double v : k) k_mean += v;
  k_mean /= double(k.size());
  std::vector<double> kf(spcoh_amplitudes_kf_count(amplitudes));
  check(spcoh_amplitudes_kf_grid(amplitudes, kf.data()));
  std::size_t central = 0;
  for (std::size_t j = 1; j < kf.size(); ++j) {
    if (std::abs(kf[j] - (k_mean + config.kappa_um)) <
        std::abs(kf[central] - (k_mean + config.kappa_um))) {
      central = j;
    }
  }

  spcoh_curve* chandle = nullptr;
  check(spcoh_coincidence_pattern(amplitudes, kf[central], &chandle));
  const Curve coincidence = take_curve(chandle);
  spcoh_curve* thandle = nullptr;
  check(spcoh_traced_pattern(amplitudes, &thandle));
  const Curve traced = take_curve(thandle);
  spcoh_amplitudes_destroy(amplitudes);

  const std::string stem = stem_for(config, "postselect");
  const std::pair<const char*, const Curve*> outputs[] = {
      {"coincidence", &coincidence}, {"traced", &traced}};
  for (const auto& [label, curve] : outputs) {
    CsvTable table;
    table.columns = {"q_um", "probability"};
    for (std::size_t i = 0; i < curve->x.size(); ++i) {
      table.rows.push_back({curve->x[i], curve->y[i]});
    }
    spcli::write_csv(
        output_path(config, "postselect", stem + "_" + label, ".csv"),
        "postselect", config, table);
  }

  // Contrast within +-1.5 fringe periods (whole grid if no fringe scale).
  double dk_max = 0.0;
  for (double a : k) {
    for (double b : k) dk_max = std::max(dk_max, std::abs(a - b));
  }
  auto windowed = [&](const Curve& curve) {
    if (config.drift_area_um2 <= 0.0 || dk_max <= 0.0) return curve.y;
    const double window = 1.5 * 2.0 * kPi / (config.drift_area_um2 * dk_max);
    std::vector<double> values;
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
      if (std::abs(curve.x[i]) <= window) values.push_back(curve.y[i]);
    }
    return values.empty() ? curve.y : values;
  };
  double vis_c = 0.0, vis_t = 0.0;
  const auto wc = windowed(coincidence);
  const auto wt = windowed(traced);
  check(spcoh_visibility(wc.data(), wc.size(), &vis_c));
  check(spcoh_visibility(wt.data(), wt.size(), &vis_t));
  std::printf("post-selected (k_f = %.6g) visibility: %.6f\n", kf[central],
              vis_c);
  std::printf("traced-out visibility:                 %.6f\n", vis_t);
  if (k.size() == 2 && config.sigma_k_um > 0.0) {
    const double overlap = std::exp(
        -dk_max * dk_max / (4.0 * config.sigma_k_um * config.sigma_k_um));
    std::printf("which-path overlap exp(-dk^2/4s^2):    %.6f\n", overlap);
  }

  if (config.plot) {
    PlotSpec plotspec;
    plotspec.title = "coincidence vs traced photon patterns";
    plotspec.x_label = "q (rad/um)";
    plotspec.y_label = "probability";
    plotspec.series.push_back(
        {"coincidence", coincidence.x, coincidence.y, kPalette[0]});
    plotspec.series.push_back({"traced", traced.x, traced.y, kPalette[1]});
    spcli::write_plot_png(output_path(config, "postselect", stem, ".png"),
                          plotspec);
  }
  return 0;
}

// ------------------------------------------------------------------- main --

RunConfig assemble_config(const std::string& subcommand,
                          const std::string& config_path,
                          const std::vector<std::string>& assignments) {
  RunConfig config;
  if (!config_path.empty()) {
    std::size_t seen = 0;
    const auto unknown = spcli::apply_config_file(config_path, config, &seen);
    if (!unknown.empty()) {
      std::string list;
      for (const auto& key : unknown) list += " " + key;
      fail(1, "unknown config keys:" + list);
    }
    if (seen == 0) {
      std::string list;
      for (const auto& key : spcli::required_keys(subcommand)) {
        list += "\n  " + key;
      }
      fail(1, "config file '" + config_path +
                  "' defines no keys; required keys for '" + subcommand +
                  "':" + list);
    }
  }
  for (const auto& a : assignments) {
    const auto pos = a.find('=');
    if (pos == std::string::npos) {
      fail(1, "--set expects key=value, got '" + a + "'");
    }
    try {
      spcli::apply_assignment(a.substr(0, pos), a.substr(pos + 1), config);
    } catch (const std::exception& e) {
      fail(1, e.what());
    }
  }
  return config;
}

void validate_common(const RunConfig& config) {
  if (config.l_c_um.empty()) fail(1, "l_c_um must not be empty");
  for (double v : {config.e_kev, config.lambda_nm, config.w_beam_um,
                   config.r_um, config.grating_period_nm,
                   config.grating_length_um}) {
    if (!(v > 0.0)) fail(1, "physical parameters must be positive");
  }
  for (double lc : config.l_c_um) {
    if (!(lc > 0.0)) fail(1, "coherence lengths must be positive");
  }
  if (config.engine != "scalar" && config.engine != "fdtd") {
    fail(1, "engine must be 'scalar' or 'fdtd'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smith-Purcell emission from partially coherent electron "
               "beams: regime analysis, FDTD scenes, emission-model "
               "comparison, and the electron post-selection demo"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand name

  std::string config_path;
  std::vector<std::string> assignments;
  app.add_option("--config", config_path, "flat key=value configuration file")
      ->expected(1);
  app.add_option("--set", assignments,
                 "override one config key (key=value, repeatable)");

  std::string flag_outdir, flag_name, flag_model, flag_engine;
  std::uint64_t flag_seed = 0;
  bool flag_plot = false, flag_seed_set = false;
  app.add_option("--outdir", flag_outdir, "output directory");
  app.add_option("--name", flag_name, "output file stem");
  app.add_option("--model", flag_model, "semiclassical | quantum");
  app.add_option("--engine", flag_engine, "scalar | fdtd");
  app.add_option("--seed", flag_seed, "RNG seed recorded in outputs")
      ->each([&](const std::string&) { flag_seed_set = true; });
  app.add_flag("--plot", flag_plot, "also write PNG plots");

  const char* names[] = {"regimes",    "sp-spectrum", "divergence",
                         "compare",    "postselect",  "reproduce-fig1c"};
  const char* descriptions[] = {
      "far-field regime classification report",
      "moving-charge grating emission spectra per polar angle",
      "transverse-scene divergence per coherence length",
      "semiclassical vs quantum model comparison and scaling fit",
      "electron post-selection vs trace-out demonstration",
      "canonical end-to-end divergence run with the default parameter set"};
  for (int i = 0; i < 6; ++i) {
    app.add_subcommand(names[i], descriptions[i]);
  }

  CLI11_PARSE(app, argc, argv);
  const std::string subcommand = app.get_subcommands().front()->get_name();

  try {
    RunConfig config = assemble_config(subcommand, config_path, assignments);
    if (!flag_outdir.empty()) config.outdir = flag_outdir;
    if (!flag_name.empty()) config.name = flag_name;
    if (!flag_model.empty()) config.model = flag_model;
    if (!flag_engine.empty()) config.engine = flag_engine;
    if (flag_seed_set) config.seed = flag_seed;
    if (flag_plot) config.plot = true;
    if (const char* env = std::getenv("SPCOH_OUTDIR"); env && *env) {
      config.outdir = env;
    }
    validate_common(config);

    if (subcommand == "regimes") return run_regimes(config);
    if (subcommand == "sp-spectrum") return run_sp_spectrum(config);
    if (subcommand == "divergence") return run_divergence(config);
    if (subcommand == "compare") return run_compare(config);
    if (subcommand == "postselect") return run_postselect(config);
    if (subcommand == "reproduce-fig1c") return run_fig1c(config);
    std::fprintf(stderr, "unknown subcommand %s\n", subcommand.c_str());
    return 1;
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
