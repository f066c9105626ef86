#pragma once

// The two competing emission models for a partially coherent electron beam:
// semiclassical (coherent emission per coherence cell, intensities summed
// incoherently over the beam) and quantum (incoherent point-like emitters).

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "spcoh/diffraction.hpp"
#include "spcoh/errors.hpp"
#include "spcoh/fdtd.hpp"

namespace spcoh {

enum class EmissionModel { kSemiclassical, kQuantumPoint };

struct BeamSpec {
  double w_beam = 20.0;  // um, incoherent beam width
  double l_c = 1.0;      // um, transverse coherence length
  EmissionModel model = EmissionModel::kSemiclassical;
  int emitters_per_cell = 1;  // QuantumPoint only
  void validate() const;
};

struct CoherenceEnsemble {
  std::vector<double> cell_centers;  // um
  std::vector<double> weights;       // sum to 1
  double cell_fwhm = 0.0;            // um, amplitude FWHM of one cell
  double beam_width = 0.0;           // um
};

// ceil(w_beam / l_c) cells, centers uniformly spaced across the beam,
// uniform weights.
CoherenceEnsemble partition_beam(const BeamSpec& beam);

// Computes the far-field intensity (unit peak) of a single Gaussian aperture.
// The scalar engine evaluates the Fraunhofer integral analytically sampled;
// the FDTD engine runs the transverse scene and propagates its monitor line.
class PatternEngine {
 public:
  virtual ~PatternEngine() = default;
  virtual std::vector<double> aperture_pattern(
      double center, double fwhm, double wavelength, double radius,
      std::span<const double> angles) = 0;
};

class ScalarEngine : public PatternEngine {
 public:
  std::vector<double> aperture_pattern(double center, double fwhm,
                                       double wavelength, double radius,
                                       std::span<const double> angles) override;
};

class FdtdEngine : public PatternEngine {
 public:
  // `prototype` fixes the numerical scene; aperture center/width/wavelength
  // are overridden per call.
  explicit FdtdEngine(TransverseConfig prototype) : proto_(prototype) {}
  std::vector<double> aperture_pattern(double center, double fwhm,
                                       double wavelength, double radius,
                                       std::span<const double> angles) override;

 private:
  TransverseConfig proto_;
};

// Incoherent sum of per-cell coherent patterns, unit peak.
FarFieldSpectrum semiclassical_pattern(const CoherenceEnsemble& ensemble,
                                       PatternEngine& engine,
                                       double wavelength, double radius,
                                       std::span<const double> angles);

enum class EmitterPlacement { kUniformLattice, kSampledDensity };

struct QuantumOptions {
  int emitters_per_cell = 1;
  // Intrinsic sub-wavelength emitter extent (amplitude FWHM, um). The
  // divergence of the quantum pattern is set by this fixed scale, never by
  // l_c. 0 selects an ideal point emitter (flat pattern).
  double emitter_fwhm = 0.3;
  EmitterPlacement placement = EmitterPlacement::kUniformLattice;
  std::uint64_t seed = 1;
};

// Incoherent sum over point-like emitters distributed across the beam.
FarFieldSpectrum quantum_pattern(const CoherenceEnsemble& ensemble,
                                 const QuantumOptions& options,
                                 PatternEngine& engine, double wavelength,
                                 double radius,
                                 std::span<const double> angles);

struct ModelComparisonRow {
  EmissionModel model{};
  double l_c = 0.0;
  std::optional<double> fwhm;  // empty when the metric is undefined
  double rms = 0.0;
};

struct ScalingFit {
  double exponent = 0.0;       // s in FWHM ~ l_c^s
  double log_prefactor = 0.0;
  int points_used = 0;
};

struct ModelComparison {
  std::vector<ModelComparisonRow> rows;
  std::optional<ScalingFit> semiclassical_fit;
  std::optional<ScalingFit> quantum_fit;
};

// Sweeps both models over the coherence lengths and fits the scaling
// exponent of FWHM vs l_c on log-log values. Requires >= 2 coherence
// lengths; rows with undefined FWHM are reported but excluded from the fit.
ModelComparison compare_models(std::span<const double> coherence_lengths,
                               double w_beam, const QuantumOptions& options,
                               PatternEngine& engine, double wavelength,
                               double radius, std::span<const double> angles);

}  // namespace spcoh
