#include "spcoh/kinematics.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace spcoh {

ElectronKinematics beta_from_energy(double kinetic_energy_kev) {
  if (!(kinetic_energy_kev >= 0.0)) {
    throw domain_error("kinetic energy must be >= 0 keV, got " +
                       std::to_string(kinetic_energy_kev));
  }
  const double gamma = 1.0 + kinetic_energy_kev / kElectronRestEnergyKeV;
  const double beta = std::sqrt(1.0 - 1.0 / (gamma * gamma));
  return ElectronKinematics{kinetic_energy_kev, beta, gamma};
}

double GratingSpec::grating_momentum() const {
  return 2.0 * std::numbers::pi / period;
}

int GratingSpec::tooth_count() const {
  const double ratio = total_length / period;
  return static_cast<int>(std::lround(ratio));
}

void GratingSpec::validate() const {
  if (!(period > 0.0)) throw domain_error("grating period must be > 0");
  if (!(total_length > 0.0)) throw domain_error("grating length must be > 0");
  if (!(tooth_height >= 0.0)) throw domain_error("tooth height must be >= 0");
  if (!(duty_cycle > 0.0 && duty_cycle < 1.0)) {
    throw domain_error("duty cycle must lie in (0,1)");
  }
  const double ratio = total_length / period;
  const double nearest = std::lround(ratio);
  if (nearest < 1.0 || std::abs(ratio - nearest) > 1e-9 * ratio) {
    throw domain_error("grating length must be an integer number of periods");
  }
}

double smith_purcell_wavelength(const GratingSpec& grating, double beta,
                                double polar_angle, int order) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw domain_error("beta must lie in (0,1), got " + std::to_string(beta));
  }
  if (order < 1) throw domain_error("diffraction order must be >= 1");
  return grating.period / order * (1.0 / beta - std::cos(polar_angle));
}

double fraunhofer_distance(double aperture, double wavelength) {
  if (!(aperture > 0.0)) throw domain_error("aperture must be > 0");
  if (!(wavelength > 0.0)) throw domain_error("wavelength must be > 0");
  return aperture * aperture / wavelength;
}

RegimeReport regime_check(double r, double l_c, double w_beam,
                          double wavelength, double threshold_factor) {
  if (!(r > 0.0 && l_c > 0.0 && w_beam > 0.0 && wavelength > 0.0)) {
    throw domain_error("regime_check requires positive lengths");
  }
  if (l_c > w_beam) {
    throw domain_error("coherence length cannot exceed the beam width");
  }
  if (!(threshold_factor > 0.0)) {
    throw domain_error("threshold factor must be > 0");
  }
  RegimeReport report;
  report.observation_distance = r;
  report.fraunhofer_distance_coherent = fraunhofer_distance(l_c, wavelength);
  report.fraunhofer_distance_beam = fraunhofer_distance(w_beam, wavelength);
  report.is_far_field_coherent =
      r > threshold_factor * report.fraunhofer_distance_coherent;
  report.is_far_field_beam =
      r > threshold_factor * report.fraunhofer_distance_beam;
  report.parallax_ratio = w_beam / r;
  report.threshold_factor = threshold_factor;
  return report;
}

}  // namespace spcoh
