#include "spcoh.h"

#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "spcoh/diffraction.hpp"
#include "spcoh/ensemble.hpp"
#include "spcoh/errors.hpp"
#include "spcoh/fdtd.hpp"
#include "spcoh/kinematics.hpp"
#include "spcoh/postselect.hpp"

namespace {

thread_local std::string g_last_error;

template <typename Fn>
spcoh_status guarded(Fn&& fn) {
  try {
    fn();
    return SPCOH_OK;
  } catch (const spcoh::domain_error& e) {
    g_last_error = e.what();
    return SPCOH_ERR_INVALID;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SPCOH_ERR_NUMERIC;
  }
}

spcoh_status invalid(const char* message) {
  g_last_error = message;
  return SPCOH_ERR_INVALID;
}

spcoh::TransverseConfig to_transverse(const spcoh_transverse_config& c) {
  spcoh::TransverseConfig config;
  config.aperture.fwhm = c.aperture_fwhm_um;
  config.aperture.center = c.aperture_center_um;
  config.aperture.wavelength = c.lambda_um;
  config.aperture.ramp_periods = c.ramp_periods;
  config.domain_width = c.domain_width_um;
  config.monitor_height = c.monitor_height_um;
  config.source_clearance = c.source_clearance_um;
  config.cell = c.cell_um;
  config.courant = c.courant;
  config.absorber_cells = c.absorber_cells;
  config.periodic_x = c.periodic_x != 0;
  config.min_settle_periods = c.min_settle_periods;
  config.max_periods = c.max_periods;
  config.steady_tolerance = c.steady_tolerance;
  return config;
}

}  // namespace

struct spcoh_field {
  spcoh::ScalarLineField field;
};

struct spcoh_curve {
  std::vector<double> x;
  std::vector<double> y;
};

struct spcoh_spectra {
  spcoh::AngularSpectra spectra;
};

struct spcoh_comparison {
  spcoh::ModelComparison comparison;
};

struct spcoh_amplitudes {
  spcoh::AmplitudeMatrix matrix;
};

extern "C" {

const char* spcoh_error_message(void) { return g_last_error.c_str(); }

spcoh_status spcoh_beta_from_energy(double kinetic_energy_kev, double* beta,
                                    double* gamma) {
  if (!beta || !gamma) return invalid("null output pointer");
  return guarded([&] {
    const auto k = spcoh::beta_from_energy(kinetic_energy_kev);
    *beta = k.beta;
    *gamma = k.gamma;
  });
}

spcoh_status spcoh_smith_purcell_wavelength(double period_um, double beta,
                                            double polar_angle_rad, int order,
                                            double* wavelength_um) {
  if (!wavelength_um) return invalid("null output pointer");
  return guarded([&] {
    spcoh::GratingSpec grating;
    grating.period = period_um;
    grating.total_length = period_um;  /* length is irrelevant here */
    if (!(period_um > 0.0)) throw spcoh::domain_error("period must be > 0");
    *wavelength_um =
        spcoh::smith_purcell_wavelength(grating, beta, polar_angle_rad, order);
  });
}

spcoh_status spcoh_fraunhofer_distance(double aperture_um, double lambda_um,
                                       double* distance_um) {
  if (!distance_um) return invalid("null output pointer");
  return guarded(
      [&] { *distance_um = spcoh::fraunhofer_distance(aperture_um, lambda_um); });
}

spcoh_status spcoh_fresnel_number(double aperture_um, double lambda_um,
                                  double distance_um, double* number) {
  if (!number) return invalid("null output pointer");
  return guarded([&] {
    *number = spcoh::fresnel_number(aperture_um, lambda_um, distance_um);
  });
}

spcoh_status spcoh_regime_check(double r_um, double l_c_um, double w_beam_um,
                                double lambda_um, double threshold_factor,
                                spcoh_regime_report* report) {
  if (!report) return invalid("null output pointer");
  return guarded([&] {
    const auto r = spcoh::regime_check(r_um, l_c_um, w_beam_um, lambda_um,
                                       threshold_factor);
    report->observation_distance = r.observation_distance;
    report->fraunhofer_distance_coherent = r.fraunhofer_distance_coherent;
    report->fraunhofer_distance_beam = r.fraunhofer_distance_beam;
    report->is_far_field_coherent = r.is_far_field_coherent ? 1 : 0;
    report->is_far_field_beam = r.is_far_field_beam ? 1 : 0;
    report->parallax_ratio = r.parallax_ratio;
    report->threshold_factor = r.threshold_factor;
  });
}

spcoh_status spcoh_field_create(size_t n, double x0, double dx,
                                double lambda_um, double plane_position,
                                const double* re, const double* im,
                                spcoh_field** field) {
  if (!field || !re) return invalid("null pointer");
  return guarded([&] {
    auto handle = std::make_unique<spcoh_field>();
    handle->field.x0 = x0;
    handle->field.dx = dx;
    handle->field.wavelength = lambda_um;
    handle->field.plane_position = plane_position;
    handle->field.amplitude.resize(n);
    for (size_t i = 0; i < n; ++i) {
      handle->field.amplitude[i] = {re[i], im ? im[i] : 0.0};
    }
    handle->field.validate();
    *field = handle.release();
  });
}

spcoh_status spcoh_field_gaussian_aperture(double fwhm_um, double center_um,
                                           double width_um, size_t n,
                                           double lambda_um,
                                           spcoh_field** field) {
  if (!field) return invalid("null pointer");
  return guarded([&] {
    auto handle = std::make_unique<spcoh_field>();
    handle->field =
        spcoh::gaussian_aperture(fwhm_um, center_um, width_um, n, lambda_um);
    *field = handle.release();
  });
}

void spcoh_field_destroy(spcoh_field* field) { delete field; }

size_t spcoh_field_size(const spcoh_field* field) {
  return field ? field->field.amplitude.size() : 0;
}

spcoh_status spcoh_field_info(const spcoh_field* field, double* x0, double* dx,
                              double* lambda_um, double* plane_position) {
  if (!field) return invalid("null field");
  if (x0) *x0 = field->field.x0;
  if (dx) *dx = field->field.dx;
  if (lambda_um) *lambda_um = field->field.wavelength;
  if (plane_position) *plane_position = field->field.plane_position;
  return SPCOH_OK;
}

spcoh_status spcoh_field_samples(const spcoh_field* field, double* re,
                                 double* im) {
  if (!field || !re || !im) return invalid("null pointer");
  for (size_t i = 0; i < field->field.amplitude.size(); ++i) {
    re[i] = field->field.amplitude[i].real();
    im[i] = field->field.amplitude[i].imag();
  }
  return SPCOH_OK;
}

spcoh_status spcoh_propagate(const spcoh_field* field, double distance_um,
                             spcoh_field** out) {
  if (!field || !out) return invalid("null pointer");
  return guarded([&] {
    auto handle = std::make_unique<spcoh_field>();
    handle->field = spcoh::angular_spectrum_propagate(field->field, distance_um);
    *out = handle.release();
  });
}

spcoh_status spcoh_far_field(const spcoh_field* field, double radius_um,
                             const double* angles_rad, size_t n_angles,
                             spcoh_curve** spectrum) {
  if (!field || !angles_rad || !spectrum) return invalid("null pointer");
  return guarded([&] {
    const auto s = spcoh::far_field(field->field, radius_um,
                                    {angles_rad, n_angles});
    auto handle = std::make_unique<spcoh_curve>();
    handle->x = s.angle;
    handle->y = s.intensity;
    *spectrum = handle.release();
  });
}

void spcoh_curve_destroy(spcoh_curve* curve) { delete curve; }

size_t spcoh_curve_size(const spcoh_curve* curve) {
  return curve ? curve->x.size() : 0;
}

spcoh_status spcoh_curve_data(const spcoh_curve* curve, double* x, double* y) {
  if (!curve) return invalid("null curve");
  if (x) std::memcpy(x, curve->x.data(), curve->x.size() * sizeof(double));
  if (y) std::memcpy(y, curve->y.data(), curve->y.size() * sizeof(double));
  return SPCOH_OK;
}

spcoh_status spcoh_divergence_metrics(const spcoh_curve* spectrum,
                                      spcoh_divergence* metrics) {
  if (!spectrum || !metrics) return invalid("null pointer");
  return guarded([&] {
    spcoh::FarFieldSpectrum s;
    s.angle = spectrum->x;
    s.intensity = spectrum->y;
    s.radius = 1.0;
    s.wavelength = 1.0;
    const auto report = spcoh::divergence_metrics(s);
    metrics->has_fwhm = report.fwhm.has_value() ? 1 : 0;
    metrics->fwhm = report.fwhm.value_or(0.0);
    metrics->rms_width = report.rms_width;
    metrics->peak_angle = report.peak_angle;
  });
}

spcoh_status spcoh_run_longitudinal(const spcoh_longitudinal_config* config,
                                    const double* wavelengths_um,
                                    size_t n_wavelengths,
                                    const double* polar_angles_rad,
                                    size_t n_angles, spcoh_spectra** spectra) {
  if (!config || !wavelengths_um || !polar_angles_rad || !spectra) {
    return invalid("null pointer");
  }
  return guarded([&] {
    spcoh::LongitudinalConfig c;
    c.grating.period = config->grating.period_um;
    c.grating.total_length = config->grating.total_length_um;
    c.grating.tooth_height = config->grating.tooth_height_um;
    c.grating.duty_cycle = config->grating.duty_cycle;
    c.beam.charge = config->charge;
    c.beam.speed = config->speed;
    c.beam.height_above_grating = config->height_above_grating_um;
    c.beam.smoothing_radius_cells = config->smoothing_radius_cells;
    c.cell = config->cell_um;
    c.courant = config->courant;
    c.absorber_cells = config->absorber_cells;
    c.clearance = config->clearance_um;
    c.monitor_height = config->monitor_height_um;
    c.space_above_monitor = config->space_above_monitor_um;
    c.ramp_travel = config->ramp_travel_um;
    c.wavelengths.assign(wavelengths_um, wavelengths_um + n_wavelengths);
    c.polar_angles.assign(polar_angles_rad, polar_angles_rad + n_angles);
    auto handle = std::make_unique<spcoh_spectra>();
    handle->spectra = spcoh::run_longitudinal(c);
    *spectra = handle.release();
  });
}

void spcoh_spectra_destroy(spcoh_spectra* spectra) { delete spectra; }

size_t spcoh_spectra_wavelength_count(const spcoh_spectra* spectra) {
  return spectra ? spectra->spectra.wavelengths.size() : 0;
}

size_t spcoh_spectra_angle_count(const spcoh_spectra* spectra) {
  return spectra ? spectra->spectra.polar_angles.size() : 0;
}

spcoh_status spcoh_spectra_row(const spcoh_spectra* spectra,
                               size_t angle_index, double* wavelengths_um,
                               double* power) {
  if (!spectra) return invalid("null spectra");
  if (angle_index >= spectra->spectra.power.size()) {
    return invalid("angle index out of range");
  }
  const auto& w = spectra->spectra.wavelengths;
  if (wavelengths_um) {
    std::memcpy(wavelengths_um, w.data(), w.size() * sizeof(double));
  }
  if (power) {
    std::memcpy(power, spectra->spectra.power[angle_index].data(),
                w.size() * sizeof(double));
  }
  return SPCOH_OK;
}

spcoh_status spcoh_spectra_peak(const spcoh_spectra* spectra,
                                size_t angle_index,
                                double* peak_wavelength_um) {
  if (!spectra || !peak_wavelength_um) return invalid("null pointer");
  return guarded([&] {
    *peak_wavelength_um = spcoh::spectral_peak(spectra->spectra, angle_index);
  });
}

spcoh_status spcoh_run_transverse(const spcoh_transverse_config* config,
                                  spcoh_field** near_field, double* residual) {
  if (!config || !near_field) return invalid("null pointer");
  return guarded([&] {
    const auto line = spcoh::run_transverse(to_transverse(*config));
    auto handle = std::make_unique<spcoh_field>();
    handle->field = line.phasor;
    if (residual) *residual = line.residual;
    *near_field = handle.release();
  });
}

namespace {

std::unique_ptr<spcoh::PatternEngine> make_engine(
    const spcoh_ensemble_config& config) {
  if (config.engine == SPCOH_ENGINE_FDTD) {
    auto proto = to_transverse(config.fdtd);
    proto.aperture.wavelength = config.lambda_um;
    return std::make_unique<spcoh::FdtdEngine>(proto);
  }
  return std::make_unique<spcoh::ScalarEngine>();
}

spcoh::QuantumOptions make_quantum_options(const spcoh_ensemble_config& c) {
  spcoh::QuantumOptions options;
  options.emitters_per_cell = c.emitters_per_cell;
  options.emitter_fwhm = c.emitter_fwhm_um;
  options.placement = c.sampled_placement
                          ? spcoh::EmitterPlacement::kSampledDensity
                          : spcoh::EmitterPlacement::kUniformLattice;
  options.seed = c.seed;
  return options;
}

}  // namespace

spcoh_status spcoh_model_pattern(const spcoh_ensemble_config* config,
                                 spcoh_model model, const double* angles_rad,
                                 size_t n_angles, spcoh_curve** pattern) {
  if (!config || !angles_rad || !pattern) return invalid("null pointer");
  return guarded([&] {
    spcoh::BeamSpec beam;
    beam.w_beam = config->w_beam_um;
    beam.l_c = config->l_c_um;
    beam.model = model == SPCOH_MODEL_QUANTUM_POINT
                     ? spcoh::EmissionModel::kQuantumPoint
                     : spcoh::EmissionModel::kSemiclassical;
    beam.emitters_per_cell = std::max(config->emitters_per_cell, 1);
    const auto ensemble = spcoh::partition_beam(beam);
    auto engine = make_engine(*config);
    const std::span<const double> angles{angles_rad, n_angles};
    const auto spectrum =
        model == SPCOH_MODEL_QUANTUM_POINT
            ? spcoh::quantum_pattern(ensemble, make_quantum_options(*config),
                                     *engine, config->lambda_um,
                                     config->radius_um, angles)
            : spcoh::semiclassical_pattern(ensemble, *engine,
                                           config->lambda_um,
                                           config->radius_um, angles);
    auto handle = std::make_unique<spcoh_curve>();
    handle->x = spectrum.angle;
    handle->y = spectrum.intensity;
    *pattern = handle.release();
  });
}

spcoh_status spcoh_compare_models(const spcoh_ensemble_config* config,
                                  const double* l_c_um, size_t n_lc,
                                  const double* angles_rad, size_t n_angles,
                                  spcoh_comparison** comparison) {
  if (!config || !l_c_um || !angles_rad || !comparison) {
    return invalid("null pointer");
  }
  return guarded([&] {
    auto engine = make_engine(*config);
    auto handle = std::make_unique<spcoh_comparison>();
    handle->comparison = spcoh::compare_models(
        {l_c_um, n_lc}, config->w_beam_um, make_quantum_options(*config),
        *engine, config->lambda_um, config->radius_um,
        {angles_rad, n_angles});
    *comparison = handle.release();
  });
}

void spcoh_comparison_destroy(spcoh_comparison* comparison) {
  delete comparison;
}

size_t spcoh_comparison_row_count(const spcoh_comparison* comparison) {
  return comparison ? comparison->comparison.rows.size() : 0;
}

spcoh_status spcoh_comparison_get_row(const spcoh_comparison* comparison,
                                      size_t index, spcoh_comparison_row* row) {
  if (!comparison || !row) return invalid("null pointer");
  if (index >= comparison->comparison.rows.size()) {
    return invalid("row index out of range");
  }
  const auto& r = comparison->comparison.rows[index];
  row->model = r.model == spcoh::EmissionModel::kQuantumPoint
                   ? SPCOH_MODEL_QUANTUM_POINT
                   : SPCOH_MODEL_SEMICLASSICAL;
  row->l_c_um = r.l_c;
  row->has_fwhm = r.fwhm.has_value() ? 1 : 0;
  row->fwhm_rad = r.fwhm.value_or(0.0);
  row->rms_rad = r.rms;
  return SPCOH_OK;
}

spcoh_status spcoh_comparison_fit(const spcoh_comparison* comparison,
                                  spcoh_model model, int* has_fit,
                                  double* exponent) {
  if (!comparison || !has_fit || !exponent) return invalid("null pointer");
  const auto& fit = model == SPCOH_MODEL_QUANTUM_POINT
                        ? comparison->comparison.quantum_fit
                        : comparison->comparison.semiclassical_fit;
  *has_fit = fit.has_value() ? 1 : 0;
  *exponent = fit ? fit->exponent : 0.0;
  return SPCOH_OK;
}

spcoh_status spcoh_build_amplitudes(const spcoh_electron_state* state,
                                    double q_half_span, size_t n_q,
                                    double grating_momentum,
                                    spcoh_amplitudes** amplitudes) {
  if (!state || !state->momenta || !state->amp_re || !amplitudes) {
    return invalid("null pointer");
  }
  return guarded([&] {
    std::vector<double> momenta(state->momenta, state->momenta + state->n);
    std::vector<std::complex<double>> amps(state->n);
    for (size_t i = 0; i < state->n; ++i) {
      amps[i] = {state->amp_re[i], state->amp_im ? state->amp_im[i] : 0.0};
    }
    const auto electron =
        spcoh::make_electron_state(std::move(momenta), std::move(amps),
                                   state->momentum_spread, state->drift_area);
    const auto grid =
        spcoh::make_photon_grid(q_half_span, n_q, grating_momentum);
    auto handle = std::make_unique<spcoh_amplitudes>();
    handle->matrix = spcoh::build_amplitudes(electron, grid);
    *amplitudes = handle.release();
  });
}

void spcoh_amplitudes_destroy(spcoh_amplitudes* amplitudes) {
  delete amplitudes;
}

size_t spcoh_amplitudes_q_count(const spcoh_amplitudes* amplitudes) {
  return amplitudes ? amplitudes->matrix.q.size() : 0;
}

size_t spcoh_amplitudes_kf_count(const spcoh_amplitudes* amplitudes) {
  return amplitudes ? amplitudes->matrix.k_f.size() : 0;
}

spcoh_status spcoh_amplitudes_kf_grid(const spcoh_amplitudes* amplitudes,
                                      double* k_f) {
  if (!amplitudes || !k_f) return invalid("null pointer");
  std::memcpy(k_f, amplitudes->matrix.k_f.data(),
              amplitudes->matrix.k_f.size() * sizeof(double));
  return SPCOH_OK;
}

spcoh_status spcoh_coincidence_pattern(const spcoh_amplitudes* amplitudes,
                                       double k_f, spcoh_curve** pattern) {
  if (!amplitudes || !pattern) return invalid("null pointer");
  return guarded([&] {
    auto handle = std::make_unique<spcoh_curve>();
    handle->x = amplitudes->matrix.q;
    handle->y = spcoh::coincidence_pattern(amplitudes->matrix, k_f);
    *pattern = handle.release();
  });
}

spcoh_status spcoh_traced_pattern(const spcoh_amplitudes* amplitudes,
                                  spcoh_curve** pattern) {
  if (!amplitudes || !pattern) return invalid("null pointer");
  return guarded([&] {
    auto handle = std::make_unique<spcoh_curve>();
    handle->x = amplitudes->matrix.q;
    handle->y = spcoh::traced_pattern(amplitudes->matrix);
    *pattern = handle.release();
  });
}

spcoh_status spcoh_visibility(const double* pattern, size_t n,
                              double* visibility) {
  if (!pattern || !visibility) return invalid("null pointer");
  return guarded(
      [&] { *visibility = spcoh::visibility({pattern, n}); });
}

}  // extern "C"
