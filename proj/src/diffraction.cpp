#include "spcoh/diffraction.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>

namespace spcoh {
namespace {

constexpr double kPi = std::numbers::pi;

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

class Fft1d {
 public:
  Fft1d(std::size_t n, int sign) : n_(n) {
    buf_ = fftw_alloc_complex(n);
    std::scoped_lock lock(fftw_plan_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, sign,
                             FFTW_ESTIMATE);
  }
  ~Fft1d() {
    {
      std::scoped_lock lock(fftw_plan_mutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(buf_);
  }
  Fft1d(const Fft1d&) = delete;
  Fft1d& operator=(const Fft1d&) = delete;

  std::complex<double>* data() {
    return reinterpret_cast<std::complex<double>*>(buf_);
  }
  void execute() { fftw_execute(plan_); }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  fftw_complex* buf_;
  fftw_plan plan_;
};

}  // namespace

void ScalarLineField::validate() const {
  if (amplitude.empty()) throw domain_error("line field has no samples");
  if (!(wavelength > 0.0)) throw domain_error("wavelength must be > 0");
  if (!(dx > 0.0)) throw domain_error("sample spacing must be > 0");
  if (dx > wavelength / 8.0 * (1.0 + 1e-12)) {
    throw domain_error("sample spacing must be <= lambda/8");
  }
}

ScalarLineField gaussian_aperture(double fwhm, double center, double width,
                                  std::size_t n, double wavelength) {
  if (!(fwhm > 0.0)) throw domain_error("aperture FWHM must be > 0");
  if (!(width > 0.0) || n < 2) throw domain_error("invalid aperture grid");
  ScalarLineField field;
  field.wavelength = wavelength;
  field.dx = width / double(n);
  field.x0 = center - width / 2.0 + field.dx / 2.0;
  field.amplitude.resize(n);
  const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (field.coordinate(i) - center) / sigma;
    field.amplitude[i] = std::exp(-0.5 * u * u);
  }
  field.validate();
  return field;
}

ScalarLineField angular_spectrum_propagate(const ScalarLineField& field,
                                           double distance) {
  field.validate();
  if (!(distance >= 0.0)) {
    throw domain_error("propagation distance must be >= 0");
  }
  const std::size_t n = field.amplitude.size();
  const std::size_t padded = std::bit_ceil(2 * n);

  Fft1d forward(padded, FFTW_FORWARD);
  std::fill(forward.data(), forward.data() + padded,
            std::complex<double>(0.0, 0.0));
  std::copy(field.amplitude.begin(), field.amplitude.end(), forward.data());
  forward.execute();

  // Aliasing sentinel: energy within 5% of the Nyquist edge of the physical
  // grid (not the padded one) must stay below 1% of the total.
  const double k = 2.0 * kPi / field.wavelength;
  const double kx_nyquist = kPi / field.dx;
  double total = 0.0, edge = 0.0;
  for (std::size_t m = 0; m < padded; ++m) {
    const double fm = (m <= padded / 2) ? double(m) : double(m) - double(padded);
    const double kx = 2.0 * kPi * fm / (double(padded) * field.dx);
    const double p = std::norm(forward.data()[m]);
    total += p;
    if (std::abs(kx) > 0.95 * kx_nyquist) edge += p;
  }
  if (total > 0.0 && edge > 0.01 * total) {
    throw aliasing_error("spectral energy near the Nyquist edge exceeds 1%");
  }

  for (std::size_t m = 0; m < padded; ++m) {
    const double fm = (m <= padded / 2) ? double(m) : double(m) - double(padded);
    const double kx = 2.0 * kPi * fm / (double(padded) * field.dx);
    const double arg = k * k - kx * kx;
    std::complex<double> h;
    if (arg >= 0.0) {
      const double kz = std::sqrt(arg);
      h = std::polar(1.0, kz * distance);
    } else {
      h = std::exp(-std::sqrt(-arg) * distance);
    }
    forward.data()[m] *= h;
  }

  Fft1d backward(padded, FFTW_BACKWARD);
  std::copy(forward.data(), forward.data() + padded, backward.data());
  backward.execute();

  ScalarLineField out = field;
  out.plane_position = field.plane_position + distance;
  for (std::size_t i = 0; i < n; ++i) {
    out.amplitude[i] = backward.data()[i] / double(padded);
  }
  return out;
}

FarFieldSpectrum far_field(const ScalarLineField& field, double radius,
                           std::span<const double> angle_grid) {
  field.validate();
  if (!(radius > 0.0)) throw domain_error("far-field radius must be > 0");
  if (angle_grid.empty()) throw domain_error("angle grid is empty");
  for (std::size_t i = 0; i < angle_grid.size(); ++i) {
    if (std::abs(angle_grid[i]) >= kPi / 2.0) {
      throw domain_error("angles must lie strictly inside (-pi/2, pi/2)");
    }
    if (i > 0 && !(angle_grid[i] > angle_grid[i - 1])) {
      throw domain_error("angle grid must be strictly increasing");
    }
  }

  const double k = 2.0 * kPi / field.wavelength;
  FarFieldSpectrum spectrum;
  spectrum.radius = radius;
  spectrum.wavelength = field.wavelength;
  spectrum.angle.assign(angle_grid.begin(), angle_grid.end());
  spectrum.intensity.resize(angle_grid.size());

  for (std::size_t a = 0; a < angle_grid.size(); ++a) {
    const double kx = k * std::sin(angle_grid[a]);
    // Phase referenced to x0 keeps the sum well conditioned for offset grids.
    std::complex<double> acc{0.0, 0.0};
    const std::complex<double> step = std::polar(1.0, -kx * field.dx);
    std::complex<double> phase{1.0, 0.0};
    for (const auto& u : field.amplitude) {
      acc += u * phase;
      phase *= step;
    }
    spectrum.intensity[a] = std::norm(acc * field.dx);
  }

  const double peak =
      *std::max_element(spectrum.intensity.begin(), spectrum.intensity.end());
  if (peak > 0.0) {
    for (auto& v : spectrum.intensity) v /= peak;
  }
  return spectrum;
}

double fresnel_number(double aperture, double wavelength, double distance) {
  if (!(aperture > 0.0 && wavelength > 0.0 && distance > 0.0)) {
    throw domain_error("fresnel_number requires positive inputs");
  }
  return aperture * aperture / (wavelength * distance);
}

namespace {

// Vertex of the parabola through three equally spaced samples.
// Returns {offset in [-1,1] units of the spacing, value at the vertex}.
std::pair<double, double> parabolic_vertex(double ym, double y0, double yp) {
  const double denom = ym - 2.0 * y0 + yp;
  if (std::abs(denom) < 1e-300) return {0.0, y0};
  double t = 0.5 * (ym - yp) / denom;
  t = std::clamp(t, -1.0, 1.0);
  const double value = y0 - 0.25 * (ym - yp) * t;
  return {t, value};
}

}  // namespace

DivergenceReport divergence_metrics(const FarFieldSpectrum& spectrum) {
  const auto& phi = spectrum.angle;
  const auto& in = spectrum.intensity;
  if (in.empty()) throw domain_error("spectrum is empty");
  if (in.size() != phi.size()) throw domain_error("angle/intensity mismatch");

  const std::size_t m =
      std::size_t(std::max_element(in.begin(), in.end()) - in.begin());
  const double peak = in[m];

  DivergenceReport report;

  // Intensity centroid and RMS width.
  double w = 0.0, s1 = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    w += in[i];
    s1 += in[i] * phi[i];
  }
  if (w > 0.0) {
    const double centroid = s1 / w;
    double s2 = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i) {
      s2 += in[i] * (phi[i] - centroid) * (phi[i] - centroid);
    }
    report.rms_width = std::sqrt(s2 / w);
  }

  // Peak angle, refined.
  report.peak_angle = phi[m];
  if (m > 0 && m + 1 < in.size()) {
    const auto [t, value] = parabolic_vertex(in[m - 1], in[m], in[m + 1]);
    report.peak_angle = phi[m] + t * (phi[m + 1] - phi[m]);
    (void)value;
  }

  // Half-maximum crossings by linear interpolation away from the peak.
  const double half = peak / 2.0;
  std::optional<double> left, right;
  for (std::size_t i = m; i-- > 0;) {
    if (in[i] < half) {
      const double f = (half - in[i]) / (in[i + 1] - in[i]);
      left = phi[i] + f * (phi[i + 1] - phi[i]);
      break;
    }
  }
  for (std::size_t i = m + 1; i < in.size(); ++i) {
    if (in[i] < half) {
      const double f = (in[i - 1] - half) / (in[i - 1] - in[i]);
      right = phi[i - 1] + f * (phi[i] - phi[i - 1]);
      break;
    }
  }
  if (left && right) report.fwhm = *right - *left;
  return report;
}

std::vector<double> make_angle_grid(double half_span, std::size_t n) {
  if (!(half_span > 0.0 && half_span < kPi / 2.0) || n < 2) {
    throw domain_error("invalid angle grid request");
  }
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = -half_span + 2.0 * half_span * double(i) / double(n - 1);
  }
  return grid;
}

}  // namespace spcoh
