#include "spcoh/postselect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace spcoh {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFwhmPerSigma = 2.3548200450309493;  // 2 sqrt(2 ln 2)

}  // namespace

ElectronState make_electron_state(std::vector<double> momenta,
                                  std::vector<std::complex<double>> amplitudes,
                                  double momentum_spread, double drift_area) {
  if (momenta.empty()) throw domain_error("electron state has no components");
  if (momenta.size() != amplitudes.size()) {
    throw domain_error("momentum and amplitude lists differ in length");
  }
  if (!(momentum_spread >= 0.0)) {
    throw domain_error("momentum spread must be >= 0");
  }
  double norm2 = 0.0;
  for (const auto& c : amplitudes) norm2 += std::norm(c);
  if (!(norm2 > 0.0)) throw domain_error("electron state has zero norm");
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& c : amplitudes) c *= inv;
  return ElectronState{std::move(momenta), std::move(amplitudes),
                       momentum_spread, drift_area};
}

double PhotonGrid::spacing() const {
  if (q.size() < 2) throw domain_error("photon grid needs >= 2 points");
  return q[1] - q[0];
}

void PhotonGrid::validate() const {
  if (q.size() < 2) throw domain_error("photon grid needs >= 2 points");
  const double dq = q[1] - q[0];
  if (!(dq > 0.0)) throw domain_error("photon grid must be increasing");
  for (std::size_t i = 1; i < q.size(); ++i) {
    if (std::abs(q[i] - q[i - 1] - dq) > 1e-9 * dq) {
      throw domain_error("photon grid must be uniform");
    }
  }
  if (std::abs(q.front() + q.back()) > 1e-9 * std::abs(q.back() - q.front())) {
    throw domain_error("photon grid must be symmetric about 0");
  }
}

PhotonGrid make_photon_grid(double q_half_span, std::size_t n, double kappa) {
  if (!(q_half_span > 0.0) || n < 2) throw domain_error("invalid photon grid");
  PhotonGrid grid;
  grid.grating_momentum = kappa;
  grid.q.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid.q[i] = -q_half_span + 2.0 * q_half_span * double(i) / double(n - 1);
  }
  return grid;
}

AmplitudeMatrix build_amplitudes(const ElectronState& state,
                                 const PhotonGrid& grid) {
  grid.validate();
  if (state.momenta.empty() ||
      state.momenta.size() != state.amplitudes.size()) {
    throw domain_error("malformed electron state");
  }
  const double dq = grid.spacing();
  const double kappa = grid.grating_momentum;
  const double sigma = state.momentum_spread;

  // The q spacing must resolve the finest expected fringe, eight samples per
  // period, whenever the drift tags paths with distinct positions.
  double dk_max = 0.0;
  for (double ka : state.momenta) {
    for (double kb : state.momenta) dk_max = std::max(dk_max, std::abs(ka - kb));
  }
  if (state.drift_area > 0.0 && dk_max > 0.0) {
    const double fringe_period = 2.0 * kPi / (state.drift_area * dk_max);
    if (dq > fringe_period / 8.0 * (1.0 + 1e-12)) {
      throw resolution_error(
          "photon grid spacing does not resolve the finest fringe");
    }
  }

  if (sigma > 0.0 && kFwhmPerSigma * sigma < 4.0 * dq * (1.0 - 1e-12)) {
    throw resolution_error(
        "k_f grid too coarse: fewer than 4 samples per envelope width");
  }

  // k_f grid covering every conservation line with margin. With a finite
  // envelope the spacing follows sigma (8 samples per sigma); the grid is
  // anchored so the central conservation value kappa + mean(k_i) is a grid
  // point. sigma = 0 keeps the q spacing and demands exact alignment.
  const auto [k_lo, k_hi] =
      std::minmax_element(state.momenta.begin(), state.momenta.end());
  const double dk = sigma > 0.0 ? sigma / 8.0 : dq;
  const double pad = sigma > 0.0 ? 6.0 * sigma + dk : 0.0;
  double k_mean = 0.0;
  for (double ki : state.momenta) k_mean += ki;
  k_mean /= double(state.momenta.size());
  const double anchor = k_mean + kappa;
  const double lo_raw = *k_lo + kappa - grid.q.back() - pad;
  const double hi = *k_hi + kappa - grid.q.front() + pad;
  const double lo = anchor - std::ceil((anchor - lo_raw) / dk) * dk;
  const std::size_t nk = std::size_t(std::floor((hi - lo) / dk)) + 1;

  AmplitudeMatrix m;
  m.grating_momentum = kappa;
  m.q = grid.q;
  m.k_f.resize(nk);
  for (std::size_t j = 0; j < nk; ++j) m.k_f[j] = lo + double(j) * dk;
  m.a.assign(grid.q.size() * nk, std::complex<double>(0.0, 0.0));

  for (std::size_t iq = 0; iq < grid.q.size(); ++iq) {
    const double q = grid.q[iq];
    for (std::size_t ic = 0; ic < state.momenta.size(); ++ic) {
      const double center = state.momenta[ic] + kappa - q;
      const std::complex<double> path =
          state.amplitudes[ic] *
          std::polar(1.0, -q * state.drift_area * state.momenta[ic]);
      if (sigma == 0.0) {
        const double pos = (center - lo) / dk;
        const auto j = static_cast<std::ptrdiff_t>(std::lround(pos));
        if (j < 0 || std::size_t(j) >= nk ||
            std::abs(pos - double(j)) > 1e-6) {
          throw domain_error(
              "sigma_k = 0 requires conservation to land on the k_f grid");
        }
        m.at(iq, std::size_t(j)) += path;
      } else {
        const auto j_lo = static_cast<std::ptrdiff_t>(
            std::ceil((center - 6.0 * sigma - lo) / dk));
        const auto j_hi = static_cast<std::ptrdiff_t>(
            std::floor((center + 6.0 * sigma - lo) / dk));
        for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(j_lo, 0);
             j <= std::min<std::ptrdiff_t>(j_hi, std::ptrdiff_t(nk) - 1);
             ++j) {
          const double u = (m.k_f[std::size_t(j)] - center) / sigma;
          m.at(iq, std::size_t(j)) += path * std::exp(-0.5 * u * u);
        }
      }
    }
  }

  double total = 0.0;
  for (const auto& v : m.a) total += std::norm(v);
  if (!(total > 0.0)) throw numeric_error("amplitude matrix is identically 0");
  const double inv = 1.0 / std::sqrt(total);
  for (auto& v : m.a) v *= inv;
  return m;
}

std::vector<double> coincidence_pattern(const AmplitudeMatrix& amplitudes,
                                        double k_f) {
  if (amplitudes.k_f.size() < 2) throw domain_error("degenerate k_f grid");
  const double dk = amplitudes.k_f[1] - amplitudes.k_f[0];
  const double pos = (k_f - amplitudes.k_f.front()) / dk;
  const auto j = static_cast<std::ptrdiff_t>(std::lround(pos));
  if (j < 0 || std::size_t(j) >= amplitudes.k_f.size() ||
      std::abs(pos - double(j)) > 1e-6) {
    throw domain_error("requested k_f is not a grid point");
  }
  std::vector<double> p(amplitudes.q.size());
  double total = 0.0;
  for (std::size_t iq = 0; iq < p.size(); ++iq) {
    p[iq] = std::norm(amplitudes.at(iq, std::size_t(j)));
    total += p[iq];
  }
  if (!(total > 0.0)) {
    throw domain_error("empty slice: no amplitude at the requested k_f");
  }
  for (auto& v : p) v /= total;
  return p;
}

std::vector<double> traced_pattern(const AmplitudeMatrix& amplitudes) {
  std::vector<double> p(amplitudes.q.size(), 0.0);
  double total = 0.0;
  for (std::size_t iq = 0; iq < p.size(); ++iq) {
    double acc = 0.0;
    for (std::size_t j = 0; j < amplitudes.k_f.size(); ++j) {
      acc += std::norm(amplitudes.at(iq, j));
    }
    p[iq] = acc;
    total += acc;
  }
  if (!(total > 0.0)) throw numeric_error("traced pattern is identically 0");
  for (auto& v : p) v /= total;
  return p;
}

double visibility(std::span<const double> pattern) {
  if (pattern.empty()) throw domain_error("pattern is empty");
  std::size_t imax = 0, imin = 0;
  for (std::size_t i = 1; i < pattern.size(); ++i) {
    if (pattern[i] > pattern[imax]) imax = i;
    if (pattern[i] < pattern[imin]) imin = i;
  }
  auto refined = [&](std::size_t i) {
    if (i == 0 || i + 1 >= pattern.size()) return pattern[i];
    const double ym = pattern[i - 1], y0 = pattern[i], yp = pattern[i + 1];
    const double denom = ym - 2.0 * y0 + yp;
    if (std::abs(denom) < 1e-300) return y0;
    double t = std::clamp(0.5 * (ym - yp) / denom, -1.0, 1.0);
    return y0 - 0.25 * (ym - yp) * t;
  };
  const double vmax = refined(imax);
  const double vmin = std::max(0.0, refined(imin));
  if (vmax + vmin == 0.0) throw domain_error("visibility undefined: max+min=0");
  return (vmax - vmin) / (vmax + vmin);
}

}  // namespace spcoh
