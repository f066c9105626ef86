#pragma once

// Scalar wave propagation on 1D transverse grids: angular-spectrum
// continuation between parallel lines and Fraunhofer far-field evaluation.
// Lengths in micrometres, angles in radians.

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "spcoh/errors.hpp"

namespace spcoh {

struct ScalarLineField {
  std::vector<std::complex<double>> amplitude;
  double x0 = 0.0;          // coordinate of sample 0, um
  double dx = 0.0;          // sample spacing, um
  double wavelength = 0.0;  // um
  double plane_position = 0.0;  // longitudinal position of the line, um

  double coordinate(std::size_t i) const { return x0 + dx * double(i); }
  void validate() const;  // dx in (0, lambda/8], nonempty
};

// Gaussian amplitude profile with the given full width at half maximum,
// sampled on a grid of n points spanning `width` centered on `center`.
ScalarLineField gaussian_aperture(double fwhm, double center, double width,
                                  std::size_t n, double wavelength);

// Exact scalar Helmholtz continuation over `distance` >= 0. Propagating
// spatial frequencies advance by their exact phase, evanescent ones decay
// with their exact exponential factor. Energy that spreads beyond the grid
// window wraps or is lost in the padding; keep the window generous.
// Throws aliasing_error if more than 1% of the spectral energy sits within
// 5% of the Nyquist band edge.
ScalarLineField angular_spectrum_propagate(const ScalarLineField& field,
                                           double distance);

struct FarFieldSpectrum {
  std::vector<double> angle;      // rad, strictly increasing
  std::vector<double> intensity;  // peak-normalized, >= 0
  double radius = 0.0;            // um
  double wavelength = 0.0;        // um
};

// Fraunhofer intensity |FT of the aperture field at spatial frequency
// sin(phi)/lambda|^2, normalized to unit peak.
FarFieldSpectrum far_field(const ScalarLineField& field, double radius,
                           std::span<const double> angle_grid);

// Fresnel number d^2 / (lambda * r). < 1 means far field.
double fresnel_number(double aperture, double wavelength, double distance);

struct DivergenceReport {
  std::optional<double> fwhm;  // empty when no half-maximum crossing exists
  double rms_width = 0.0;      // about the intensity centroid
  double peak_angle = 0.0;     // parabolically refined
};

// Width metrics of an angular intensity pattern. FWHM uses linear
// interpolation of the half-maximum crossings around the global peak.
DivergenceReport divergence_metrics(const FarFieldSpectrum& spectrum);

// Uniform symmetric angle grid of n points spanning [-half_span, half_span].
std::vector<double> make_angle_grid(double half_span, std::size_t n);

}  // namespace spcoh
