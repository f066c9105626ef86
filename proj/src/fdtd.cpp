#include "spcoh/fdtd.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace spcoh {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

// Cubic-graded conductivity profile targeting R0 normal-incidence reflection.
constexpr double kPmlR0 = 1e-8;
constexpr int kPmlOrder = 3;

double pml_sigma_max(int absorber_cells, double cell) {
  return -(kPmlOrder + 1) * std::log(kPmlR0) / (2.0 * absorber_cells * cell);
}

// Conductivity at fractional cell position `pos` along an axis of n cells
// with absorbing layers of `a` cells at both ends (or none, when periodic).
double sigma_profile(double pos, int n, int a, double sigma_max) {
  double depth = 0.0;
  if (pos < a) {
    depth = (double(a) - pos) / a;
  } else if (pos > n - a) {
    depth = (pos - double(n - a)) / a;
  }
  return sigma_max * depth * depth * depth;
}

struct LossCoefficients {
  double ca, cb;  // U <- ca*U + cb*(spatial difference); cb includes 1/cell
};

LossCoefficients make_coefficients(double sigma, double dt, double cell) {
  if (sigma <= 0.0) return {1.0, dt / cell};
  const double ca = std::exp(-sigma * dt);
  return {ca, (1.0 - ca) / (sigma * cell)};
}

}  // namespace

double SimGrid::dt() const { return courant * cell / kSqrt2; }

void SimGrid::validate() const {
  if (!(cell > 0.0)) throw domain_error("cell size must be > 0");
  if (!(courant > 0.0 && courant <= 0.99)) {
    throw domain_error("Courant factor must lie in (0, 0.99]");
  }
  if (absorber_cells < 8) throw domain_error("absorber must be >= 8 cells");
  const int margin_x = periodic_x ? 4 : 2 * absorber_cells + 4;
  if (nx < margin_x || ny < 2 * absorber_cells + 4) {
    throw domain_error("grid too small for the absorbing layers");
  }
}

FieldFrame::FieldFrame(const SimGrid& grid) : nx_(grid.nx), ny_(grid.ny) {
  ex_.assign(std::size_t(nx_) * (ny_ + 1), 0.0);
  ey_.assign(std::size_t(nx_ + 1) * ny_, 0.0);
  hzx_.assign(std::size_t(nx_) * ny_, 0.0);
  hzy_.assign(std::size_t(nx_) * ny_, 0.0);
}

Fdtd2d::Fdtd2d(const SimGrid& grid) : grid_(grid), frame_(grid) {
  grid_.validate();
  const double dt = grid_.dt();
  const double smax = pml_sigma_max(grid_.absorber_cells, grid_.cell);
  const int a = grid_.absorber_cells;

  auto fill = [&](std::vector<double>& ca, std::vector<double>& cb, int count,
                  double offset, int n, bool absorbing) {
    ca.resize(count);
    cb.resize(count);
    for (int i = 0; i < count; ++i) {
      const double sigma =
          absorbing ? sigma_profile(double(i) + offset, n, a, smax) : 0.0;
      const auto [c0, c1] = make_coefficients(sigma, dt, grid_.cell);
      ca[i] = c0;
      cb[i] = c1;
    }
  };
  fill(ca_ex_, cb_ex_, grid_.ny + 1, 0.0, grid_.ny, true);
  fill(ca_hzy_, cb_hzy_, grid_.ny, 0.5, grid_.ny, true);
  fill(ca_ey_, cb_ey_, grid_.nx + 1, 0.0, grid_.nx, !grid_.periodic_x);
  fill(ca_hzx_, cb_hzx_, grid_.nx, 0.5, grid_.nx, !grid_.periodic_x);

  pec_ex_.assign(frame_.ex_.size(), 0);
  pec_ey_.assign(frame_.ey_.size(), 0);
}

void Fdtd2d::add_pec_block(int i0, int i1, int j0, int j1) {
  i0 = std::max(i0, 0);
  j0 = std::max(j0, 0);
  i1 = std::min(i1, grid_.nx);
  j1 = std::min(j1, grid_.ny);
  if (i0 >= i1 || j0 >= j1) return;
  has_pec_ = true;
  // Tangential E on the block surface and inside it is forced to zero:
  // Ex samples border cells vertically, Ey samples border horizontally.
  for (int i = i0; i < i1; ++i) {
    for (int j = j0; j <= j1; ++j) {
      pec_ex_[std::size_t(i) * (grid_.ny + 1) + j] = 1;
    }
  }
  for (int i = i0; i <= i1; ++i) {
    for (int j = j0; j < j1; ++j) {
      pec_ey_[std::size_t(i) * grid_.ny + j] = 1;
    }
  }
}

void Fdtd2d::update_h() {
  const int nx = grid_.nx, ny = grid_.ny;
  for (int i = 0; i < nx; ++i) {
    const double cax = ca_hzx_[i], cbx = cb_hzx_[i];
    double* hzx = &frame_.hzx_[std::size_t(i) * ny];
    double* hzy = &frame_.hzy_[std::size_t(i) * ny];
    const double* exr = &frame_.ex_[std::size_t(i) * (ny + 1)];
    const double* eyl = &frame_.ey_[std::size_t(i) * ny];
    const int i_right = (grid_.periodic_x && i == nx - 1) ? 0 : i + 1;
    const double* eyr = &frame_.ey_[std::size_t(i_right) * ny];
    for (int j = 0; j < ny; ++j) {
      hzx[j] = cax * hzx[j] - cbx * (eyr[j] - eyl[j]);
      hzy[j] = ca_hzy_[j] * hzy[j] + cb_hzy_[j] * (exr[j + 1] - exr[j]);
    }
  }
}

void Fdtd2d::update_e() {
  const int nx = grid_.nx, ny = grid_.ny;
  for (int i = 0; i < nx; ++i) {
    double* ex = &frame_.ex_[std::size_t(i) * (ny + 1)];
    const double* hzx = &frame_.hzx_[std::size_t(i) * ny];
    const double* hzy = &frame_.hzy_[std::size_t(i) * ny];
    for (int j = 1; j < ny; ++j) {
      ex[j] = ca_ex_[j] * ex[j] +
              cb_ex_[j] * (hzx[j] + hzy[j] - hzx[j - 1] - hzy[j - 1]);
    }
  }
  const int i_begin = grid_.periodic_x ? 0 : 1;
  for (int i = i_begin; i < nx; ++i) {
    double* ey = &frame_.ey_[std::size_t(i) * ny];
    const double* hzr = &frame_.hzx_[std::size_t(i) * ny];
    const double* hyr = &frame_.hzy_[std::size_t(i) * ny];
    const int i_left = (grid_.periodic_x && i == 0) ? nx - 1 : i - 1;
    const double* hzl = &frame_.hzx_[std::size_t(i_left) * ny];
    const double* hyl = &frame_.hzy_[std::size_t(i_left) * ny];
    const double cai = ca_ey_[i], cbi = cb_ey_[i];
    for (int j = 0; j < ny; ++j) {
      ey[j] = cai * ey[j] - cbi * (hzr[j] + hyr[j] - hzl[j] - hyl[j]);
    }
  }
}

void Fdtd2d::enforce_pec() {
  if (!has_pec_) return;
  for (std::size_t k = 0; k < pec_ex_.size(); ++k) {
    if (pec_ex_[k]) frame_.ex_[k] = 0.0;
  }
  for (std::size_t k = 0; k < pec_ey_.size(); ++k) {
    if (pec_ey_[k]) frame_.ey_[k] = 0.0;
  }
}

void Fdtd2d::check_finite() const {
  for (const double v : frame_.hzx_) {
    if (!std::isfinite(v)) {
      throw numeric_error(
          "non-finite field detected at t = " + std::to_string(frame_.time) +
          " (step " + std::to_string(steps_done_) +
          "): unstable run; check the Courant bound and source amplitudes");
    }
  }
}

void Fdtd2d::step() {
  const double dt = grid_.dt();
  update_h();
  update_e();
  const double t_mid = frame_.time + 0.5 * dt;
  for (auto& source : sources_) source(frame_, t_mid, dt);
  enforce_pec();
  frame_.time += dt;
  ++steps_done_;
  if (steps_done_ % 64 == 0) check_finite();
}

void Fdtd2d::run(int steps) {
  for (int s = 0; s < steps; ++s) step();
  check_finite();
}

double Fdtd2d::field_energy() const {
  double acc = 0.0;
  for (const double v : frame_.ex_) acc += v * v;
  for (const double v : frame_.ey_) acc += v * v;
  for (std::size_t k = 0; k < frame_.hzx_.size(); ++k) {
    const double h = frame_.hzx_[k] + frame_.hzy_[k];
    acc += h * h;
  }
  return 0.5 * acc * grid_.cell * grid_.cell;
}

double Fdtd2d::interior_energy() const {
  const int a = grid_.absorber_cells;
  const int i0 = grid_.periodic_x ? 0 : a;
  const int i1 = grid_.periodic_x ? grid_.nx : grid_.nx - a;
  double acc = 0.0;
  for (int i = i0; i < i1; ++i) {
    for (int j = a; j < grid_.ny - a; ++j) {
      const double h =
          frame_.hzx_[std::size_t(i) * grid_.ny + j] +
          frame_.hzy_[std::size_t(i) * grid_.ny + j];
      acc += frame_.ex(i, j) * frame_.ex(i, j) +
             frame_.ey(i, j) * frame_.ey(i, j) + h * h;
    }
  }
  return 0.5 * acc * grid_.cell * grid_.cell;
}

// ---------------------------------------------------------------- Scene A --

void MovingChargeSource::validate() const {
  if (!(speed > 0.0 && speed < 1.0)) {
    throw domain_error("charge speed must lie in (0,1) c");
  }
  if (!(height_above_grating > 0.0)) {
    throw domain_error("beam height above the grating must be > 0");
  }
  if (!(smoothing_radius_cells > 0.0)) {
    throw domain_error("smoothing radius must be > 0");
  }
}

void LongitudinalConfig::validate() const {
  grating.validate();
  beam.validate();
  if (wavelengths.size() < 2) {
    throw domain_error("need a wavelength analysis grid (>= 2 points)");
  }
  for (std::size_t i = 0; i < wavelengths.size(); ++i) {
    if (!(wavelengths[i] > 0.0)) throw domain_error("wavelengths must be > 0");
    if (i > 0 && !(wavelengths[i] > wavelengths[i - 1])) {
      throw domain_error("wavelength grid must be increasing");
    }
  }
  if (polar_angles.empty()) throw domain_error("need at least one polar angle");
  for (double theta : polar_angles) {
    if (!(theta > 0.0 && theta < kPi)) {
      throw domain_error("polar angles must lie in (0, pi)");
    }
  }
  const double lambda_min = wavelengths.front();
  if (clearance < 5.0 * lambda_min) {
    throw domain_error("grating needs >= 5 wavelengths of clearance");
  }
  if (!(cell > 0.0) || cell > lambda_min / 10.0) {
    throw domain_error("cell must resolve the shortest wavelength (<= l/10)");
  }
}

AngularSpectra run_longitudinal(const LongitudinalConfig& config) {
  config.validate();
  const double cell = config.cell;
  const int a = config.absorber_cells;
  auto cells_of = [&](double length) {
    return int(std::lround(length / cell));
  };

  const int clear = cells_of(config.clearance);
  const int grating_cells = cells_of(config.grating.total_length);
  const int nx = a + clear + grating_cells + clear + a;

  const int base_gap = cells_of(0.1);
  const int base_h = std::max(cells_of(0.2), 4);
  const int tooth_h = cells_of(config.grating.tooth_height);
  const int j_base0 = a + base_gap;
  const int j_base1 = j_base0 + base_h;
  const int j_teeth_top = j_base1 + tooth_h;
  const int j_monitor = j_teeth_top + cells_of(config.monitor_height);
  const int ny = j_monitor + cells_of(config.space_above_monitor) + a;

  SimGrid grid;
  grid.cell = cell;
  grid.nx = nx;
  grid.ny = ny;
  grid.courant = config.courant;
  grid.absorber_cells = a;
  grid.periodic_x = false;

  Fdtd2d sim(grid);

  // Conducting base slab plus teeth under the beam path.
  const int gx0 = a + clear;
  sim.add_pec_block(gx0, gx0 + grating_cells, j_base0, j_base1);
  if (tooth_h > 0) {
    const int period_cells = cells_of(config.grating.period);
    const int tooth_w =
        std::max(1, cells_of(config.grating.period * config.grating.duty_cycle));
    for (int t = 0; t < config.grating.tooth_count(); ++t) {
      const int x0 = gx0 + t * period_cells;
      sim.add_pec_block(x0, x0 + tooth_w, j_base1, j_teeth_top);
    }
  }

  // Moving smeared charge: Jx = q(t) v g(x - x_c(t), y - y_beam), turned on
  // and off smoothly over `ramp_travel` of flight inside the clear regions.
  const double sigma = config.beam.smoothing_radius_cells * cell;
  const double y_beam =
      double(j_teeth_top) * cell + config.beam.height_above_grating;
  const double x_start = (a + 1) * cell + 4.0 * sigma;
  const double x_stop = (nx - a - 1) * cell - 4.0 * sigma;
  if (x_stop - x_start < 2.5 * config.ramp_travel) {
    throw domain_error("domain too short to complete the charge transit");
  }
  const double v = config.beam.speed;
  const double charge = config.beam.charge;
  const double ramp = config.ramp_travel;
  const int j_beam = int(y_beam / cell);

  sim.add_source([=](FieldFrame& frame, double t, double dt) {
    const double xc = x_start + v * t;
    if (xc > x_stop) return;
    const double travelled = xc - x_start;
    const double remaining = x_stop - xc;
    double gate = 1.0;
    if (travelled < ramp) {
      const double s = travelled / ramp;
      gate = std::sin(kPi * s / 2.0);
      gate *= gate;
    } else if (remaining < ramp) {
      const double s = remaining / ramp;
      gate = std::sin(kPi * s / 2.0);
      gate *= gate;
    }
    const double amplitude = charge * v * gate;
    const int reach = int(std::ceil(4.0 * sigma / cell));
    const int ic = int(xc / cell);
    const double norm = 1.0 / (2.0 * kPi * sigma * sigma);
    for (int i = std::max(ic - reach, 0);
         i <= std::min(ic + reach, frame.nx() - 1); ++i) {
      const double dxs = (double(i) + 0.5) * cell - xc;
      for (int j = std::max(j_beam - reach, 1);
           j <= std::min(j_beam + reach, frame.ny() - 1); ++j) {
        const double dys = double(j) * cell - y_beam;
        const double g =
            norm * std::exp(-(dxs * dxs + dys * dys) / (2.0 * sigma * sigma));
        frame.ex(i, j) -= dt * amplitude * g;
      }
    }
  });

  // Record Hz along the monitor line, decimated but comfortably above the
  // Nyquist rate of the shortest analysis wavelength.
  const double dt = grid.dt();
  const double lambda_min = config.wavelengths.front();
  const int stride = std::max(1, int(std::floor(lambda_min / (4.0 * dt))));
  const int col0 = a + 1;
  const int col1 = nx - a - 1;
  const int ncols = col1 - col0;

  const double t_transit = (x_stop - x_start) / v;
  const double t_settle = std::hypot(nx * cell, ny * cell);
  const int total_steps = int(std::ceil((t_transit + t_settle) / dt));

  std::vector<std::vector<double>> record;
  std::vector<double> sample_times;
  record.reserve(std::size_t(total_steps / stride) + 2);
  for (int s = 0; s < total_steps; ++s) {
    sim.step();
    if (s % stride == 0) {
      std::vector<double> row(static_cast<std::size_t>(ncols));
      for (int i = 0; i < ncols; ++i) {
        row[std::size_t(i)] = sim.frame().hz(col0 + i, j_monitor);
      }
      record.push_back(std::move(row));
      sample_times.push_back(sim.frame().time);
    }
  }

  // Temporal DFT per wavelength, then a far-field sum over the line:
  // A(theta) = sin(theta) * sum_x Hz(x, w) exp(-i k x cos(theta)) dx.
  AngularSpectra spectra;
  spectra.wavelengths = config.wavelengths;
  spectra.polar_angles = config.polar_angles;
  spectra.power.assign(config.polar_angles.size(),
                       std::vector<double>(config.wavelengths.size(), 0.0));

  const double dt_sample = stride * dt;
  std::vector<std::complex<double>> line(static_cast<std::size_t>(ncols));
  for (std::size_t w = 0; w < config.wavelengths.size(); ++w) {
    const double omega = 2.0 * kPi / config.wavelengths[w];
    std::fill(line.begin(), line.end(), std::complex<double>(0.0, 0.0));
    for (std::size_t s = 0; s < record.size(); ++s) {
      const std::complex<double> phase =
          std::polar(dt_sample, omega * sample_times[s]);
      const auto& row = record[s];
      for (int i = 0; i < ncols; ++i) {
        line[std::size_t(i)] += row[std::size_t(i)] * phase;
      }
    }
    for (std::size_t ang = 0; ang < config.polar_angles.size(); ++ang) {
      const double theta = config.polar_angles[ang];
      const double kx = 2.0 * kPi / config.wavelengths[w] * std::cos(theta);
      std::complex<double> acc{0.0, 0.0};
      for (int i = 0; i < ncols; ++i) {
        const double x = (double(col0 + i) + 0.5) * cell;
        acc += line[std::size_t(i)] * std::polar(cell, -kx * x);
      }
      spectra.power[ang][w] = std::norm(acc * std::sin(theta));
    }
  }

  double peak = 0.0;
  for (const auto& row : spectra.power) {
    for (double vpow : row) peak = std::max(peak, vpow);
  }
  if (peak > 0.0) {
    for (auto& row : spectra.power) {
      for (auto& vpow : row) vpow /= peak;
    }
  }
  return spectra;
}

double spectral_peak(const AngularSpectra& spectra, std::size_t angle_index) {
  if (angle_index >= spectra.power.size()) {
    throw domain_error("angle index out of range");
  }
  const auto& row = spectra.power[angle_index];
  const std::size_t m =
      std::size_t(std::max_element(row.begin(), row.end()) - row.begin());
  double peak = spectra.wavelengths[m];
  if (m > 0 && m + 1 < row.size()) {
    const double denom = row[m - 1] - 2.0 * row[m] + row[m + 1];
    if (std::abs(denom) > 1e-300) {
      const double t =
          std::clamp(0.5 * (row[m - 1] - row[m + 1]) / denom, -1.0, 1.0);
      peak += t * (spectra.wavelengths[std::min(m + 1, row.size() - 1)] -
                   spectra.wavelengths[m]);
    }
  }
  return peak;
}

// ---------------------------------------------------------------- Scene B --

void ApertureSource::validate() const {
  if (!(wavelength > 0.0)) throw domain_error("drive wavelength must be > 0");
  if (fwhm < 0.0) throw domain_error("aperture FWHM must be >= 0");
  if (!(ramp_periods >= 1.0)) throw domain_error("ramp must cover >= 1 period");
}

void TransverseConfig::validate() const {
  aperture.validate();
  const double lambda = aperture.wavelength;
  if (!(cell > 0.0) || cell > lambda / 8.0) {
    throw domain_error("cell must be <= lambda/8 for the monitor line");
  }
  if (!(domain_width > 4.0 * lambda)) throw domain_error("domain too narrow");
  if (monitor_height < 2.0 * lambda) {
    throw domain_error("monitor must sit >= 2 wavelengths above the source");
  }
  if (source_clearance < 5.0 * lambda) {
    throw domain_error("need >= 5 wavelengths between monitor and absorber");
  }
  if (min_settle_periods < 20) {
    throw domain_error("steady state needs >= 20 periods after the ramp");
  }
  if (!(steady_tolerance > 0.0)) throw domain_error("tolerance must be > 0");
}

NearFieldLine run_transverse(const TransverseConfig& config) {
  config.validate();
  const double lambda = config.aperture.wavelength;
  const double cell = config.cell;
  auto cells_of = [&](double length) {
    return int(std::lround(length / cell));
  };

  const int a = config.absorber_cells;
  const int nx = cells_of(config.domain_width);
  const int j_src = a + cells_of(config.source_clearance);
  const int j_mon = j_src + cells_of(config.monitor_height);
  const int ny = j_mon + cells_of(config.source_clearance) + a;
  // Monitor samples in the side absorbers carry no physics; skip them.
  const int col0 = config.periodic_x ? 0 : a + 1;
  const int col1 = config.periodic_x ? nx : nx - a - 1;

  // Integer steps per optical period, still within the stability bound.
  const double dt_max = config.courant * cell / kSqrt2;
  const int steps_per_period = int(std::ceil(lambda / dt_max));
  const double dt = lambda / steps_per_period;

  SimGrid grid;
  grid.cell = cell;
  grid.nx = nx;
  grid.ny = ny;
  grid.courant = std::min(0.99, dt * kSqrt2 / cell);
  grid.absorber_cells = a;
  grid.periodic_x = config.periodic_x;

  // Transverse drive profile. Below one cell it collapses to a single
  // sample (point aperture); otherwise the discretized FWHM must stay
  // within 1% of the request.
  const double xc = config.domain_width / 2.0 + config.aperture.center;
  std::vector<double> profile(std::size_t(nx), 0.0);
  if (config.aperture.fwhm < cell) {
    profile[std::size_t(std::lround(xc / cell - 0.5)) % nx] = 1.0;
  } else {
    const double sigma =
        config.aperture.fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    for (int i = 0; i < nx; ++i) {
      const double dxs = (double(i) + 0.5) * cell - xc;
      profile[std::size_t(i)] = std::exp(-dxs * dxs / (2.0 * sigma * sigma));
    }
    // Interpolated FWHM of the sampled profile.
    auto crossing = [&](int dir) {
      int i = int(std::lround(xc / cell - 0.5));
      while (true) {
        const int next = i + dir;
        if (next < 0 || next >= nx) return 1e30;
        if (profile[std::size_t(next)] < 0.5) {
          const double f = (profile[std::size_t(i)] - 0.5) /
                           (profile[std::size_t(i)] - profile[std::size_t(next)]);
          return (double(i) + 0.5 + f * dir) * cell;
        }
        i = next;
      }
    };
    const double measured = crossing(+1) - crossing(-1);
    if (std::abs(measured - config.aperture.fwhm) >
        0.01 * config.aperture.fwhm) {
      throw domain_error("sampled aperture FWHM deviates by more than 1%");
    }
  }

  Fdtd2d sim(grid);
  const double omega = 2.0 * kPi / lambda;
  const double ramp_time = config.aperture.ramp_periods * lambda;
  sim.add_source([=, &profile](FieldFrame& frame, double t, double dt_step) {
    double gate = 1.0;
    if (t < ramp_time) {
      const double s = std::sin(kPi * t / (2.0 * ramp_time));
      gate = s * s;
    }
    const double drive = gate * std::sin(omega * t);
    for (int i = 0; i < nx; ++i) {
      frame.ex(i, j_src) -= dt_step * drive * profile[std::size_t(i)];
    }
  });

  // Ramp, then let the slowest (grazing) components cross to the monitor.
  const int transit_periods = int(std::ceil(2.0 * ny * cell / lambda));
  const int settle_periods =
      int(std::ceil(config.aperture.ramp_periods)) +
      std::max(config.min_settle_periods, transit_periods);
  sim.run(settle_periods * steps_per_period);

  // Per-period phasor accumulation until two successive periods agree.
  const int ncols = col1 - col0;
  std::vector<std::complex<double>> previous;
  std::vector<std::complex<double>> current(static_cast<std::size_t>(ncols));
  double residual = 0.0;
  bool converged = false;
  int periods_used = settle_periods;
  while (periods_used < config.max_periods) {
    std::fill(current.begin(), current.end(), std::complex<double>(0.0, 0.0));
    for (int s = 0; s < steps_per_period; ++s) {
      sim.step();
      const std::complex<double> phase =
          std::polar(2.0 * dt / lambda, omega * sim.frame().time);
      for (int i = 0; i < ncols; ++i) {
        current[std::size_t(i)] += phase * sim.frame().ex(col0 + i, j_mon);
      }
    }
    ++periods_used;
    if (!previous.empty()) {
      double num = 0.0, den = 0.0;
      for (int i = 0; i < ncols; ++i) {
        num += std::norm(current[std::size_t(i)] - previous[std::size_t(i)]);
        den += std::norm(current[std::size_t(i)]);
      }
      residual = den > 0.0 ? std::sqrt(num / den) : 1.0;
      if (residual < config.steady_tolerance) {
        converged = true;
        break;
      }
    }
    previous = current;
  }
  if (!converged) {
    throw convergence_error(
        "steady state not reached: residual " + std::to_string(residual) +
            " after " + std::to_string(periods_used) + " periods",
        residual);
  }

  NearFieldLine line;
  line.height = double(j_mon - j_src) * cell;
  line.residual = residual;
  line.phasor.wavelength = lambda;
  line.phasor.dx = cell;
  line.phasor.x0 = (double(col0) + 0.5) * cell - config.domain_width / 2.0;
  line.phasor.plane_position = 0.0;
  line.phasor.amplitude = std::move(current);
  line.phasor.validate();
  return line;
}

}  // namespace spcoh
