#include "spcoh/ensemble.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <string>

namespace spcoh {

void BeamSpec::validate() const {
  if (!(l_c > 0.0)) throw domain_error("coherence length must be > 0");
  if (!(w_beam > 0.0)) throw domain_error("beam width must be > 0");
  if (l_c > w_beam * (1.0 + 1e-12)) {
    throw domain_error("coherence length cannot exceed the beam width");
  }
  if (model == EmissionModel::kQuantumPoint && emitters_per_cell < 1) {
    throw domain_error("emitters_per_cell must be >= 1");
  }
}

CoherenceEnsemble partition_beam(const BeamSpec& beam) {
  beam.validate();
  const double ratio = beam.w_beam / beam.l_c;
  const auto cells =
      static_cast<std::size_t>(std::ceil(ratio * (1.0 - 1e-12)));
  CoherenceEnsemble ensemble;
  ensemble.cell_fwhm = beam.l_c;
  ensemble.beam_width = beam.w_beam;
  const double spacing = beam.w_beam / double(cells);
  ensemble.cell_centers.resize(cells);
  ensemble.weights.assign(cells, 1.0 / double(cells));
  for (std::size_t i = 0; i < cells; ++i) {
    ensemble.cell_centers[i] =
        -beam.w_beam / 2.0 + (double(i) + 0.5) * spacing;
  }
  return ensemble;
}

std::vector<double> ScalarEngine::aperture_pattern(
    double center, double fwhm, double wavelength, double radius,
    std::span<const double> angles) {
  if (fwhm <= 0.0) {
    // Ideal point emitter: |FT of a delta|^2 is flat.
    (void)radius;
    return std::vector<double>(angles.size(), 1.0);
  }
  const double width = std::max(10.0 * fwhm, 8.0 * wavelength);
  const auto n = std::bit_ceil(std::size_t(width / (wavelength / 16.0)) + 1);
  const ScalarLineField aperture =
      gaussian_aperture(fwhm, center, width, n, wavelength);
  return far_field(aperture, radius, angles).intensity;
}

std::vector<double> FdtdEngine::aperture_pattern(double center, double fwhm,
                                                 double wavelength,
                                                 double radius,
                                                 std::span<const double> angles) {
  TransverseConfig config = proto_;
  config.aperture.center = center;
  config.aperture.fwhm = fwhm;
  config.aperture.wavelength = wavelength;
  const NearFieldLine line = run_transverse(config);
  return far_field(line.phasor, radius, angles).intensity;
}

namespace {

FarFieldSpectrum sum_patterns(const std::vector<double>& centers,
                              const std::vector<double>& weights, double fwhm,
                              PatternEngine& engine, double wavelength,
                              double radius, std::span<const double> angles) {
  if (!(radius > 0.0)) throw domain_error("radius must be > 0");
  FarFieldSpectrum total;
  total.radius = radius;
  total.wavelength = wavelength;
  total.angle.assign(angles.begin(), angles.end());
  total.intensity.assign(angles.size(), 0.0);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    std::vector<double> pattern;
    try {
      pattern =
          engine.aperture_pattern(centers[i], fwhm, wavelength, radius, angles);
    } catch (const domain_error& e) {
      throw domain_error("cell " + std::to_string(i) + ": " + e.what());
    } catch (const std::exception& e) {
      throw numeric_error("cell " + std::to_string(i) + ": " + e.what());
    }
    for (std::size_t a = 0; a < pattern.size(); ++a) {
      total.intensity[a] += weights[i] * pattern[a];
    }
  }
  const double peak =
      *std::max_element(total.intensity.begin(), total.intensity.end());
  if (peak > 0.0) {
    for (auto& v : total.intensity) v /= peak;
  }
  return total;
}

}  // namespace

FarFieldSpectrum semiclassical_pattern(const CoherenceEnsemble& ensemble,
                                       PatternEngine& engine,
                                       double wavelength, double radius,
                                       std::span<const double> angles) {
  if (ensemble.cell_centers.empty()) throw domain_error("empty ensemble");
  return sum_patterns(ensemble.cell_centers, ensemble.weights,
                      ensemble.cell_fwhm, engine, wavelength, radius, angles);
}

FarFieldSpectrum quantum_pattern(const CoherenceEnsemble& ensemble,
                                 const QuantumOptions& options,
                                 PatternEngine& engine, double wavelength,
                                 double radius,
                                 std::span<const double> angles) {
  if (ensemble.cell_centers.empty()) throw domain_error("empty ensemble");
  if (options.emitters_per_cell < 1) {
    throw domain_error("emitters_per_cell must be >= 1");
  }
  std::vector<double> positions;
  const std::size_t cells = ensemble.cell_centers.size();
  positions.reserve(cells * std::size_t(options.emitters_per_cell));
  if (options.placement == EmitterPlacement::kUniformLattice) {
    const std::size_t n = cells * std::size_t(options.emitters_per_cell);
    for (std::size_t j = 0; j < n; ++j) {
      positions.push_back(-ensemble.beam_width / 2.0 +
                          (double(j) + 0.5) * ensemble.beam_width / double(n));
    }
  } else {
    // Draw emitter positions from each cell's |psi|^2 (intensity sigma is
    // the amplitude sigma over sqrt(2)).
    std::mt19937_64 rng(options.seed);
    const double sigma =
        ensemble.cell_fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0))) /
        std::sqrt(2.0);
    for (double center : ensemble.cell_centers) {
      std::normal_distribution<double> dist(center, sigma);
      for (int e = 0; e < options.emitters_per_cell; ++e) {
        positions.push_back(dist(rng));
      }
    }
  }
  const std::vector<double> weights(positions.size(),
                                    1.0 / double(positions.size()));
  return sum_patterns(positions, weights, options.emitter_fwhm, engine,
                      wavelength, radius, angles);
}

namespace {

std::optional<ScalingFit> fit_power_law(
    const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = double(points.size());
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) return std::nullopt;
  ScalingFit fit;
  fit.exponent = (n * sxy - sx * sy) / denom;
  fit.log_prefactor = (sy - fit.exponent * sx) / n;
  fit.points_used = int(points.size());
  return fit;
}

}  // namespace

ModelComparison compare_models(std::span<const double> coherence_lengths,
                               double w_beam, const QuantumOptions& options,
                               PatternEngine& engine, double wavelength,
                               double radius, std::span<const double> angles) {
  if (coherence_lengths.size() < 2) {
    throw domain_error("scaling fit requires >= 2 coherence lengths");
  }
  ModelComparison comparison;
  std::vector<std::pair<double, double>> semi_points, quantum_points;
  for (double l_c : coherence_lengths) {
    BeamSpec beam;
    beam.w_beam = w_beam;
    beam.l_c = l_c;
    const CoherenceEnsemble ensemble = partition_beam(beam);
    for (EmissionModel model :
         {EmissionModel::kSemiclassical, EmissionModel::kQuantumPoint}) {
      const FarFieldSpectrum spectrum =
          model == EmissionModel::kSemiclassical
              ? semiclassical_pattern(ensemble, engine, wavelength, radius,
                                      angles)
              : quantum_pattern(ensemble, options, engine, wavelength, radius,
                                angles);
      const DivergenceReport metrics = divergence_metrics(spectrum);
      comparison.rows.push_back(
          ModelComparisonRow{model, l_c, metrics.fwhm, metrics.rms_width});
      if (metrics.fwhm) {
        auto& points = model == EmissionModel::kSemiclassical ? semi_points
                                                              : quantum_points;
        points.emplace_back(l_c, *metrics.fwhm);
      }
    }
  }
  comparison.semiclassical_fit = fit_power_law(semi_points);
  comparison.quantum_fit = fit_power_law(quantum_points);
  return comparison;
}

}  // namespace spcoh
