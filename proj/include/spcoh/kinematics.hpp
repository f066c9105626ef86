#pragma once

// Closed-form electron and radiation kinematics. All lengths are in
// micrometres, angles in radians, energies in keV.

#include "spcoh/errors.hpp"

namespace spcoh {

inline constexpr double kElectronRestEnergyKeV = 510.999;

struct ElectronKinematics {
  double kinetic_energy_kev = 0.0;
  double beta = 0.0;   // v/c
  double gamma = 1.0;  // Lorentz factor
};

// Relativistic speed from kinetic energy. Throws domain_error for E < 0.
ElectronKinematics beta_from_energy(double kinetic_energy_kev);

struct GratingSpec {
  double period = 0.2;        // um
  double total_length = 4.0;  // um
  double tooth_height = 0.1;  // um (0 = flat mirror control)
  double duty_cycle = 0.5;    // tooth fill fraction of one period

  double grating_momentum() const;  // 2*pi/period, rad/um
  int tooth_count() const;          // total_length/period, must be integral
  void validate() const;
};

// Grating dispersion lambda = (period/order) * (1/beta - cos(theta)).
// theta is the polar angle from the electron velocity.
double smith_purcell_wavelength(const GratingSpec& grating, double beta,
                                double polar_angle, int order);

// Far-field (Fraunhofer) distance d^2/lambda for an aperture of size d.
double fraunhofer_distance(double aperture, double wavelength);

struct RegimeReport {
  double observation_distance = 0.0;
  double fraunhofer_distance_coherent = 0.0;  // l_c^2 / lambda
  double fraunhofer_distance_beam = 0.0;      // w_beam^2 / lambda
  bool is_far_field_coherent = false;
  bool is_far_field_beam = false;
  double parallax_ratio = 0.0;  // w_beam / r
  double threshold_factor = 1.0;
};

// Classifies an observation distance against both Fraunhofer distances.
// The far-field flags use r > factor * d^2/lambda (factor defaults to 1).
RegimeReport regime_check(double r, double l_c, double w_beam,
                          double wavelength, double threshold_factor = 1.0);

}  // namespace spcoh
