#pragma once

// Minimal quantum model of electron-photon entanglement in grating emission:
// joint amplitudes over photon transverse momentum q and final electron
// momentum k_f, with coincidence (post-selected) and traced-out photon
// patterns. Momenta in rad/um, lengths in um.

#include <complex>
#include <span>
#include <vector>

#include "spcoh/errors.hpp"

namespace spcoh {

struct ElectronState {
  std::vector<double> momenta;                    // component momenta k_i
  std::vector<std::complex<double>> amplitudes;   // c_i, sum |c_i|^2 = 1
  double momentum_spread = 0.0;                   // sigma_k of the final-state
                                                  // envelope; 0 = exact delta
  // Transverse displacement accumulated per unit transverse momentum between
  // preparation and emission (free drift D/k_z). Component i emits from
  // x_i = drift_area * k_i, which tags its photon amplitude with exp(-i q x_i).
  double drift_area = 0.0;
};

// Normalizes the amplitudes and validates the component lists.
ElectronState make_electron_state(std::vector<double> momenta,
                                  std::vector<std::complex<double>> amplitudes,
                                  double momentum_spread,
                                  double drift_area = 0.0);

struct PhotonGrid {
  std::vector<double> q;          // uniform, symmetric about 0
  double grating_momentum = 0.0;  // kappa
  double spacing() const;
  void validate() const;
};

PhotonGrid make_photon_grid(double q_half_span, std::size_t n, double kappa);

struct AmplitudeMatrix {
  std::vector<double> q;                  // photon momenta (rows)
  std::vector<double> k_f;                // final electron momenta (columns)
  std::vector<std::complex<double>> a;    // row-major, sum |a|^2 = 1
  double grating_momentum = 0.0;

  std::complex<double>& at(std::size_t iq, std::size_t ik) {
    return a[iq * k_f.size() + ik];
  }
  const std::complex<double>& at(std::size_t iq, std::size_t ik) const {
    return a[iq * k_f.size() + ik];
  }
};

// A(q, k_f) = N sum_i c_i exp(-i q x_i) G(k_f - (k_i + kappa - q); sigma_k).
// The k_f grid is built to cover every conservation line with margin, at the
// q-grid spacing. Throws resolution_error when sigma_k > 0 is unresolved
// (fewer than 4 samples per envelope FWHM); sigma_k = 0 requires the
// conservation values to land on the k_f grid.
AmplitudeMatrix build_amplitudes(const ElectronState& state,
                                 const PhotonGrid& grid);

// P(q | k_f): photon pattern in coincidence with one final electron momentum
// (must be a k_f grid point). Normalized to unit sum.
std::vector<double> coincidence_pattern(const AmplitudeMatrix& amplitudes,
                                        double k_f);

// P(q) = sum_{k_f} |A|^2: photon pattern with the electron traced out.
// Normalized to unit sum.
std::vector<double> traced_pattern(const AmplitudeMatrix& amplitudes);

// Fringe contrast (max - min)/(max + min) with parabolic refinement of both
// extremes. Callers restrict the span to the window of interest beforehand.
double visibility(std::span<const double> pattern);

}  // namespace spcoh
