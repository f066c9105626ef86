#pragma once

// 2D time-domain Maxwell solver on a staggered grid, TE polarization
// (Ex, Ey in plane, Hz out of plane), split-field PML absorbers and PEC
// structures. Natural units c = eps0 = mu0 = 1; lengths in um, so time is
// measured in um of light travel.
//
// Two scenes are built on top of the raw stepper:
//   - longitudinal: a smeared moving charge passing over a conducting
//     grating; radiated energy density vs wavelength per polar angle.
//   - transverse: a monochromatic current sheet with a Gaussian transverse
//     profile; steady-state phasor on a monitor line (x-periodic domain).

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "spcoh/diffraction.hpp"
#include "spcoh/errors.hpp"
#include "spcoh/kinematics.hpp"

namespace spcoh {

struct SimGrid {
  double cell = 0.005;  // um, identical in both axes
  int nx = 0;
  int ny = 0;
  double courant = 0.99;   // safety factor S; dt = S * cell / (c sqrt(2))
  int absorber_cells = 10;
  bool periodic_x = false;

  double dt() const;
  void validate() const;
};

class FieldFrame {
 public:
  explicit FieldFrame(const SimGrid& grid);

  // Ex at (i+1/2, j), i in [0,nx), j in [0,ny].
  double& ex(int i, int j) { return ex_[std::size_t(i) * (ny_ + 1) + j]; }
  double ex(int i, int j) const { return ex_[std::size_t(i) * (ny_ + 1) + j]; }
  // Ey at (i, j+1/2), i in [0,nx], j in [0,ny).
  double& ey(int i, int j) { return ey_[std::size_t(i) * ny_ + j]; }
  double ey(int i, int j) const { return ey_[std::size_t(i) * ny_ + j]; }
  // Hz = Hzx + Hzy at (i+1/2, j+1/2).
  double hz(int i, int j) const {
    return hzx_[std::size_t(i) * ny_ + j] + hzy_[std::size_t(i) * ny_ + j];
  }
  // Adds to Hz, splitting evenly between the PML partial fields.
  void add_hz(int i, int j, double value) {
    hzx_[std::size_t(i) * ny_ + j] += 0.5 * value;
    hzy_[std::size_t(i) * ny_ + j] += 0.5 * value;
  }

  double time = 0.0;

  int nx() const { return nx_; }
  int ny() const { return ny_; }

 private:
  friend class Fdtd2d;
  int nx_, ny_;
  std::vector<double> ex_, ey_, hzx_, hzy_;
};

// Current injected into the E update at time t (the half step between field
// updates). Deposits into frame E samples as E -= dt * J.
using CurrentSource = std::function<void(FieldFrame&, double t, double dt)>;

class Fdtd2d {
 public:
  explicit Fdtd2d(const SimGrid& grid);

  // Marks a rectangle of cells [i0,i1) x [j0,j1) as perfect conductor.
  void add_pec_block(int i0, int i1, int j0, int j1);
  void add_source(CurrentSource source) { sources_.push_back(std::move(source)); }

  // Advances one time step. Checks for non-finite fields every 64 steps and
  // throws numeric_error with a stability diagnostic.
  void step();
  void run(int steps);

  double field_energy() const;          // whole grid
  double interior_energy() const;       // excludes absorber layers

  const SimGrid& grid() const { return grid_; }
  FieldFrame& frame() { return frame_; }
  const FieldFrame& frame() const { return frame_; }

 private:
  void update_h();
  void update_e();
  void enforce_pec();
  void check_finite() const;

  SimGrid grid_;
  FieldFrame frame_;
  std::vector<CurrentSource> sources_;
  std::vector<std::uint8_t> pec_ex_, pec_ey_;
  bool has_pec_ = false;
  // Loss coefficient tables, indexed by the relevant transverse position.
  std::vector<double> ca_ex_, cb_ex_;    // per j (integer y)
  std::vector<double> ca_ey_, cb_ey_;    // per i (integer x)
  std::vector<double> ca_hzx_, cb_hzx_;  // per i+1/2
  std::vector<double> ca_hzy_, cb_hzy_;  // per j+1/2
  long steps_done_ = 0;
};

// ---- Scene A: moving charge over a grating (longitudinal plane) ----

struct MovingChargeSource {
  double charge = 1.0;             // arbitrary units (linear problem)
  double speed = 0.3;              // fraction of c, in +x
  double height_above_grating = 0.03;  // um
  double smoothing_radius_cells = 2.0; // Gaussian sigma of the blob, in cells
  void validate() const;
};

struct LongitudinalConfig {
  GratingSpec grating;
  MovingChargeSource beam;
  double cell = 0.005;      // um
  double courant = 0.99;
  int absorber_cells = 16;
  double clearance = 3.0;       // um of vacuum between grating and side PML
  double monitor_height = 2.0;  // um above the tooth tops
  double space_above_monitor = 1.0;  // um below the top PML
  double ramp_travel = 1.5;     // um of travel over which the charge turns on
  std::vector<double> wavelengths;   // um, spectral analysis grid
  std::vector<double> polar_angles;  // rad, from the +x (beam) direction
  void validate() const;
};

// Energy spectra: power[a][w] is the radiated energy density at
// polar_angles[a], wavelengths[w], normalized to unit global peak.
struct AngularSpectra {
  std::vector<double> wavelengths;
  std::vector<double> polar_angles;
  std::vector<std::vector<double>> power;
};

AngularSpectra run_longitudinal(const LongitudinalConfig& config);

// Wavelength of the strongest spectral line at one angle (parabolic refine).
double spectral_peak(const AngularSpectra& spectra, std::size_t angle_index);

// ---- Scene B: monochromatic aperture source (transverse plane) ----

struct ApertureSource {
  double fwhm = 1.0;       // um; 0 or below one cell collapses to one sample
  double center = 0.0;     // um, relative to the domain center
  double wavelength = 0.6; // um (drive frequency c/lambda)
  double ramp_periods = 10.0;
  void validate() const;
};

struct TransverseConfig {
  ApertureSource aperture;
  double domain_width = 16.0;   // um
  double monitor_height = 3.0;  // um above the source line
  double source_clearance = 3.0;  // um between source line and bottom PML,
                                  // and between monitor and top PML
  double cell = 0.03;   // um
  double courant = 0.99;
  int absorber_cells = 12;
  // Periodic in x keeps transverse translations exact (the default for
  // ensemble work); false adds side absorbers for open-boundary runs.
  bool periodic_x = true;
  int min_settle_periods = 20;  // after the ramp
  int max_periods = 400;
  double steady_tolerance = 0.01;  // successive-period L2 residual
  void validate() const;
};

struct NearFieldLine {
  ScalarLineField phasor;   // Ex phasor along the monitor line
  double height = 0.0;      // um above the source line
  double residual = 0.0;    // measured steady-state residual
};

// Runs to steady state and returns the single-frequency Ex phasor on the
// monitor line. Throws convergence_error (with the measured residual) if the
// two-period comparison never falls below the tolerance.
NearFieldLine run_transverse(const TransverseConfig& config);

}  // namespace spcoh
