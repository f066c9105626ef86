#pragma once

// Flat key=value run configuration shared by every subcommand. Defaults
// reproduce the canonical demonstration parameter set (30 keV, 200 nm
// grating, 600 nm light, 20 um beam, l_c = 0.2/1/4 um, r = 100 um).
// Precedence: builtin defaults < config file < command-line flags.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spcli {

struct RunConfig {
  // Physical parameters.
  double e_kev = 30.0;
  double lambda_nm = 600.0;
  double grating_period_nm = 200.0;
  double grating_length_um = 4.0;
  double tooth_height_nm = 100.0;
  double duty_cycle = 0.5;
  double w_beam_um = 20.0;
  std::vector<double> l_c_um = {0.2, 1.0, 4.0};
  double r_um = 100.0;
  std::vector<double> theta_deg = {60.0, 90.0, 120.0};
  double fraunhofer_factor = 1.0;

  // Numerical parameters (zero = per-subcommand default).
  double cell_nm = 0.0;
  double courant = 0.99;
  int absorber_cells = 0;
  int steady_periods = 20;
  int max_periods = 400;
  double ramp_periods = 10.0;
  double steady_tol = 0.01;
  double monitor_height_um = 3.0;
  double beam_height_nm = 30.0;
  std::vector<double> lambda_band_nm = {420.0, 900.0};
  int n_lambda = 241;
  int n_phi = 1201;
  double phi_max_rad = 0.0;  // 0 = auto from the expected divergence

  // Emission model selection.
  std::string model = "semiclassical";  // semiclassical | quantum
  std::string engine = "scalar";        // scalar | fdtd
  int emitters_per_cell = 1;
  double emitter_size_nm = 300.0;
  std::string placement = "lattice";  // lattice | sampled
  std::uint64_t seed = 1;

  // Electron-photon entanglement demo.
  std::vector<double> k_components_um = {-1.0, 1.0};
  std::vector<double> amp_re = {1.0, 1.0};
  std::vector<double> amp_im = {0.0, 0.0};
  double sigma_k_um = 1.5;
  double drift_area_um2 = 3.14159265358979324;
  double kappa_um = 31.4159265358979324;  // 2 pi / 200 nm
  double q_half_span_um = 3.0;
  int n_q = 769;

  // Output control.
  std::string outdir = "out";
  std::string name;  // defaults to the subcommand
  bool plot = false;

  // Every key in canonical order with its current value, for config echo.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

// Parses `key = value` lines ('#' comments, blank lines ignored).
std::map<std::string, std::string> parse_config_text(const std::string& text);

// Loads a config file into `config`. Returns the list of unknown keys.
// Throws std::runtime_error when the file cannot be read or a value fails
// to parse. `keys_seen` reports how many recognized keys were applied.
std::vector<std::string> apply_config_file(const std::string& path,
                                           RunConfig& config,
                                           std::size_t* keys_seen = nullptr);

// Applies one key=value assignment (flag override). Throws on unknown key
// or malformed value.
void apply_assignment(const std::string& key, const std::string& value,
                      RunConfig& config);

// Required keys for a subcommand, used in the empty-config diagnostic.
std::vector<std::string> required_keys(const std::string& subcommand);

std::vector<double> parse_double_list(const std::string& text);

}  // namespace spcli
