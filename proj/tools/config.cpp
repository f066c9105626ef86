#include "config.hpp"

#include <cctype>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace spcli {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_double(values[i]);
  }
  return out;
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (trim(text.substr(used)).size() > 0) {
    throw std::runtime_error("malformed number: '" + text + "'");
  }
  return v;
}

struct Field {
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = [] {
    std::vector<std::pair<std::string, Field>> t;
    auto add_double = [&](const std::string& key, double RunConfig::* member) {
      t.push_back({key,
                   {[member](const RunConfig& c) {
                      return format_double(c.*member);
                    },
                    [member, key](RunConfig& c, const std::string& v) {
                      c.*member = parse_double(v);
                    }}});
    };
    auto add_int = [&](const std::string& key, int RunConfig::* member) {
      t.push_back({key,
                   {[member](const RunConfig& c) {
                      return std::to_string(c.*member);
                    },
                    [member](RunConfig& c, const std::string& v) {
                      c.*member = int(std::lround(parse_double(v)));
                    }}});
    };
    auto add_list = [&](const std::string& key,
                        std::vector<double> RunConfig::* member) {
      t.push_back({key,
                   {[member](const RunConfig& c) {
                      return format_list(c.*member);
                    },
                    [member](RunConfig& c, const std::string& v) {
                      c.*member = parse_double_list(v);
                    }}});
    };
    auto add_string = [&](const std::string& key,
                          std::string RunConfig::* member) {
      t.push_back({key,
                   {[member](const RunConfig& c) { return c.*member; },
                    [member](RunConfig& c, const std::string& v) {
                      c.*member = trim(v);
                    }}});
    };

    add_double("E_keV", &RunConfig::e_kev);
    add_double("lambda_nm", &RunConfig::lambda_nm);
    add_double("Lambda_nm", &RunConfig::grating_period_nm);
    add_double("L_um", &RunConfig::grating_length_um);
    add_double("tooth_height_nm", &RunConfig::tooth_height_nm);
    add_double("duty_cycle", &RunConfig::duty_cycle);
    add_double("w_beam_um", &RunConfig::w_beam_um);
    add_list("l_c_um", &RunConfig::l_c_um);
    add_double("r_um", &RunConfig::r_um);
    add_list("theta_deg", &RunConfig::theta_deg);
    add_double("fraunhofer_factor", &RunConfig::fraunhofer_factor);

    add_double("cell_nm", &RunConfig::cell_nm);
    add_double("courant", &RunConfig::courant);
    add_int("absorber_cells", &RunConfig::absorber_cells);
    add_int("steady_periods", &RunConfig::steady_periods);
    add_int("max_periods", &RunConfig::max_periods);
    add_double("ramp_periods", &RunConfig::ramp_periods);
    add_double("steady_tol", &RunConfig::steady_tol);
    add_double("monitor_height_um", &RunConfig::monitor_height_um);
    add_double("beam_height_nm", &RunConfig::beam_height_nm);
    add_list("lambda_band_nm", &RunConfig::lambda_band_nm);
    add_int("n_lambda", &RunConfig::n_lambda);
    add_int("n_phi", &RunConfig::n_phi);
    add_double("phi_max_rad", &RunConfig::phi_max_rad);

    add_string("model", &RunConfig::model);
    add_string("engine", &RunConfig::engine);
    add_int("emitters_per_cell", &RunConfig::emitters_per_cell);
    add_double("emitter_size_nm", &RunConfig::emitter_size_nm);
    add_string("placement", &RunConfig::placement);
    t.push_back({"seed",
                 {[](const RunConfig& c) { return std::to_string(c.seed); },
                  [](RunConfig& c, const std::string& v) {
                    c.seed = std::stoull(trim(v));
                  }}});

    add_list("k_components_um", &RunConfig::k_components_um);
    add_list("amp_re", &RunConfig::amp_re);
    add_list("amp_im", &RunConfig::amp_im);
    add_double("sigma_k_um", &RunConfig::sigma_k_um);
    add_double("drift_area_um2", &RunConfig::drift_area_um2);
    add_double("kappa_um", &RunConfig::kappa_um);
    add_double("q_half_span_um", &RunConfig::q_half_span_um);
    add_int("n_q", &RunConfig::n_q);

    add_string("outdir", &RunConfig::outdir);
    add_string("name", &RunConfig::name);
    t.push_back({"plot",
                 {[](const RunConfig& c) { return c.plot ? "1" : "0"; },
                  [](RunConfig& c, const std::string& v) {
                    const std::string s = trim(v);
                    c.plot = (s == "1" || s == "true" || s == "yes");
                  }}});
    return t;
  }();
  return table;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    values.push_back(parse_double(item));
  }
  if (values.empty()) throw std::runtime_error("empty list: '" + text + "'");
  return values;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, field] : fields()) {
    out.emplace_back(key, field.get(*this));
  }
  return out;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> entries;
  std::stringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto pos = line.find('=');
    if (pos == std::string::npos) {
      throw std::runtime_error("config line without '=': '" + line + "'");
    }
    entries[trim(line.substr(0, pos))] = trim(line.substr(pos + 1));
  }
  return entries;
}

void apply_assignment(const std::string& key, const std::string& value,
                      RunConfig& config) {
  for (const auto& [name, field] : fields()) {
    if (name == key) {
      field.set(config, value);
      return;
    }
  }
  throw std::runtime_error("unknown config key: '" + key + "'");
}

std::vector<std::string> apply_config_file(const std::string& path,
                                           RunConfig& config,
                                           std::size_t* keys_seen) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto entries = parse_config_text(buffer.str());
  std::vector<std::string> unknown;
  std::size_t applied = 0;
  for (const auto& [key, value] : entries) {
    try {
      apply_assignment(key, value, config);
      ++applied;
    } catch (const std::runtime_error& e) {
      const std::string what = e.what();
      if (what.rfind("unknown config key", 0) == 0) {
        unknown.push_back(key);
      } else {
        throw;
      }
    }
  }
  if (keys_seen) *keys_seen = applied;
  return unknown;
}

std::vector<std::string> required_keys(const std::string& subcommand) {
  if (subcommand == "regimes") {
    return {"r_um", "l_c_um", "w_beam_um", "lambda_nm", "fraunhofer_factor"};
  }
  if (subcommand == "sp-spectrum") {
    return {"E_keV", "Lambda_nm", "L_um", "theta_deg", "lambda_band_nm",
            "cell_nm"};
  }
  if (subcommand == "postselect") {
    return {"k_components_um", "sigma_k_um", "kappa_um", "drift_area_um2",
            "q_half_span_um"};
  }
  // divergence, compare, reproduce-fig1c
  return {"lambda_nm", "w_beam_um", "l_c_um", "r_um", "model", "engine"};
}

}  // namespace spcli
