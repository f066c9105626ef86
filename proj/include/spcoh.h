/* spcoh: Smith-Purcell emission from partially coherent electron beams.
 *
 * C interface to the simulation core. All lengths are micrometres, angles
 * radians, energies keV. Every function returns a status code; on failure
 * spcoh_error_message() describes the most recent error on this thread.
 * Objects returned through handle out-parameters are owned by the caller
 * and released with the matching *_destroy function.
 */

#ifndef SPCOH_H
#define SPCOH_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spcoh_status {
  SPCOH_OK = 0,
  SPCOH_ERR_INVALID = 1, /* bad physical or numerical input */
  SPCOH_ERR_NUMERIC = 2  /* instability, non-convergence, aliasing */
} spcoh_status;

const char* spcoh_error_message(void);

/* ---- kinematics ---------------------------------------------------- */

spcoh_status spcoh_beta_from_energy(double kinetic_energy_kev, double* beta,
                                    double* gamma);
spcoh_status spcoh_smith_purcell_wavelength(double period_um, double beta,
                                            double polar_angle_rad, int order,
                                            double* wavelength_um);
spcoh_status spcoh_fraunhofer_distance(double aperture_um, double lambda_um,
                                       double* distance_um);
spcoh_status spcoh_fresnel_number(double aperture_um, double lambda_um,
                                  double distance_um, double* number);

typedef struct spcoh_regime_report {
  double observation_distance;
  double fraunhofer_distance_coherent;
  double fraunhofer_distance_beam;
  int is_far_field_coherent;
  int is_far_field_beam;
  double parallax_ratio;
  double threshold_factor;
} spcoh_regime_report;

spcoh_status spcoh_regime_check(double r_um, double l_c_um, double w_beam_um,
                                double lambda_um, double threshold_factor,
                                spcoh_regime_report* report);

/* ---- complex line fields and sampled curves ------------------------ */

typedef struct spcoh_field spcoh_field; /* complex amplitude on a line */
typedef struct spcoh_curve spcoh_curve; /* real y(x) samples */

spcoh_status spcoh_field_create(size_t n, double x0, double dx,
                                double lambda_um, double plane_position,
                                const double* re, const double* im,
                                spcoh_field** field);
spcoh_status spcoh_field_gaussian_aperture(double fwhm_um, double center_um,
                                           double width_um, size_t n,
                                           double lambda_um,
                                           spcoh_field** field);
void spcoh_field_destroy(spcoh_field* field);
size_t spcoh_field_size(const spcoh_field* field);
spcoh_status spcoh_field_info(const spcoh_field* field, double* x0, double* dx,
                              double* lambda_um, double* plane_position);
spcoh_status spcoh_field_samples(const spcoh_field* field, double* re,
                                 double* im);

/* Exact scalar Helmholtz continuation over distance >= 0. */
spcoh_status spcoh_propagate(const spcoh_field* field, double distance_um,
                             spcoh_field** out);
/* Fraunhofer intensity vs angle, unit peak. */
spcoh_status spcoh_far_field(const spcoh_field* field, double radius_um,
                             const double* angles_rad, size_t n_angles,
                             spcoh_curve** spectrum);

void spcoh_curve_destroy(spcoh_curve* curve);
size_t spcoh_curve_size(const spcoh_curve* curve);
spcoh_status spcoh_curve_data(const spcoh_curve* curve, double* x, double* y);

typedef struct spcoh_divergence {
  int has_fwhm; /* 0 when no half-maximum crossing exists */
  double fwhm;
  double rms_width;
  double peak_angle;
} spcoh_divergence;

spcoh_status spcoh_divergence_metrics(const spcoh_curve* spectrum,
                                      spcoh_divergence* metrics);

/* ---- FDTD scenes ---------------------------------------------------- */

typedef struct spcoh_grating {
  double period_um;
  double total_length_um;
  double tooth_height_um; /* 0 = flat mirror control */
  double duty_cycle;
} spcoh_grating;

typedef struct spcoh_longitudinal_config {
  spcoh_grating grating;
  double charge;
  double speed; /* fraction of c */
  double height_above_grating_um;
  double smoothing_radius_cells;
  double cell_um;
  double courant;
  int absorber_cells;
  double clearance_um;
  double monitor_height_um;
  double space_above_monitor_um;
  double ramp_travel_um;
} spcoh_longitudinal_config;

typedef struct spcoh_spectra spcoh_spectra; /* power vs wavelength per angle */

spcoh_status spcoh_run_longitudinal(const spcoh_longitudinal_config* config,
                                    const double* wavelengths_um,
                                    size_t n_wavelengths,
                                    const double* polar_angles_rad,
                                    size_t n_angles, spcoh_spectra** spectra);
void spcoh_spectra_destroy(spcoh_spectra* spectra);
size_t spcoh_spectra_wavelength_count(const spcoh_spectra* spectra);
size_t spcoh_spectra_angle_count(const spcoh_spectra* spectra);
spcoh_status spcoh_spectra_row(const spcoh_spectra* spectra,
                               size_t angle_index, double* wavelengths_um,
                               double* power);
spcoh_status spcoh_spectra_peak(const spcoh_spectra* spectra,
                                size_t angle_index,
                                double* peak_wavelength_um);

typedef struct spcoh_transverse_config {
  double aperture_fwhm_um; /* 0 = single-cell point source */
  double aperture_center_um;
  double lambda_um;
  double ramp_periods;
  double domain_width_um;
  double monitor_height_um;
  double source_clearance_um;
  double cell_um;
  double courant;
  int absorber_cells;
  int periodic_x; /* nonzero: x-periodic; zero: side absorbers */
  int min_settle_periods;
  int max_periods;
  double steady_tolerance;
} spcoh_transverse_config;

spcoh_status spcoh_run_transverse(const spcoh_transverse_config* config,
                                  spcoh_field** near_field, double* residual);

/* ---- emission-model ensembles --------------------------------------- */

typedef enum spcoh_model {
  SPCOH_MODEL_SEMICLASSICAL = 0,
  SPCOH_MODEL_QUANTUM_POINT = 1
} spcoh_model;

typedef enum spcoh_engine {
  SPCOH_ENGINE_SCALAR = 0,
  SPCOH_ENGINE_FDTD = 1
} spcoh_engine;

typedef struct spcoh_ensemble_config {
  double w_beam_um;
  double l_c_um;
  double lambda_um;
  double radius_um;
  int emitters_per_cell;
  double emitter_fwhm_um; /* quantum model; 0 = ideal point */
  int sampled_placement;  /* 0 = uniform lattice, 1 = |psi|^2 sampling */
  uint64_t seed;
  spcoh_engine engine;
  /* engine = FDTD: scene prototype; its aperture fields are overridden */
  spcoh_transverse_config fdtd;
} spcoh_ensemble_config;

spcoh_status spcoh_model_pattern(const spcoh_ensemble_config* config,
                                 spcoh_model model, const double* angles_rad,
                                 size_t n_angles, spcoh_curve** pattern);

typedef struct spcoh_comparison_row {
  spcoh_model model;
  double l_c_um;
  int has_fwhm;
  double fwhm_rad;
  double rms_rad;
} spcoh_comparison_row;

typedef struct spcoh_comparison spcoh_comparison;

/* Sweeps both models over >= 2 coherence lengths and fits FWHM ~ l_c^s. */
spcoh_status spcoh_compare_models(const spcoh_ensemble_config* config,
                                  const double* l_c_um, size_t n_lc,
                                  const double* angles_rad, size_t n_angles,
                                  spcoh_comparison** comparison);
void spcoh_comparison_destroy(spcoh_comparison* comparison);
size_t spcoh_comparison_row_count(const spcoh_comparison* comparison);
spcoh_status spcoh_comparison_get_row(const spcoh_comparison* comparison,
                                      size_t index, spcoh_comparison_row* row);
spcoh_status spcoh_comparison_fit(const spcoh_comparison* comparison,
                                  spcoh_model model, int* has_fit,
                                  double* exponent);

/* ---- electron-photon entanglement model ----------------------------- */

typedef struct spcoh_electron_state {
  size_t n;
  const double* momenta; /* k_i, rad/um */
  const double* amp_re;
  const double* amp_im; /* NULL = all imaginary parts zero */
  double momentum_spread; /* sigma_k; 0 = exact conservation */
  double drift_area;      /* x_i = drift_area * k_i, um^2 */
} spcoh_electron_state;

typedef struct spcoh_amplitudes spcoh_amplitudes;

spcoh_status spcoh_build_amplitudes(const spcoh_electron_state* state,
                                    double q_half_span, size_t n_q,
                                    double grating_momentum,
                                    spcoh_amplitudes** amplitudes);
void spcoh_amplitudes_destroy(spcoh_amplitudes* amplitudes);
size_t spcoh_amplitudes_q_count(const spcoh_amplitudes* amplitudes);
size_t spcoh_amplitudes_kf_count(const spcoh_amplitudes* amplitudes);
spcoh_status spcoh_amplitudes_kf_grid(const spcoh_amplitudes* amplitudes,
                                      double* k_f);
spcoh_status spcoh_coincidence_pattern(const spcoh_amplitudes* amplitudes,
                                       double k_f, spcoh_curve** pattern);
spcoh_status spcoh_traced_pattern(const spcoh_amplitudes* amplitudes,
                                  spcoh_curve** pattern);
spcoh_status spcoh_visibility(const double* pattern, size_t n,
                              double* visibility);

#ifdef __cplusplus
}
#endif

#endif /* SPCOH_H */
