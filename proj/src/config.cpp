#include "dfsgate/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace dfsgate {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  size_t pos = 0;
  double parsed = 0.0;
  try {
    parsed = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + value + "' as a number");
  }
  if (pos != value.size())
    throw ConfigError("key '" + key + "': trailing characters in '" + value + "'");
  return parsed;
}

int parse_int(const std::string& key, const std::string& value) {
  const double d = parse_double(key, value);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d)
    throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
  return i;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

void apply_key(ExperimentConfig& config, const std::string& key, const std::string& value) {
  if (key == "ion_mass_u") {
    config.ion_mass_u = parse_double(key, value);
  } else if (key == "charge_number") {
    config.charge_number = parse_int(key, value);
  } else if (key == "raman_wavelength_m") {
    config.raman_wavelength_m = parse_double(key, value);
  } else if (key == "mode") {
    config.mode = value;
  } else if (key == "distance_parameter") {
    config.distance_parameter = parse_int(key, value);
  } else if (key == "detuning_hz") {
    config.detuning_hz = parse_double(key, value);
  } else if (key == "gate_loops") {
    config.gate_loops = parse_int(key, value);
  } else if (key == "rabi_hz") {
    if (value == "auto")
      config.rabi_hz.reset();
    else
      config.rabi_hz = parse_double(key, value);
  } else if (key == "phase_difference_rad") {
    config.phase_difference_rad = parse_double(key, value);
  } else if (key == "stark_up_hz") {
    config.stark_up_hz = parse_double(key, value);
  } else if (key == "stark_down_hz") {
    config.stark_down_hz = parse_double(key, value);
  } else if (key == "illumination_eps") {
    config.illumination_eps.clear();
    for (const auto& item : split_list(value))
      config.illumination_eps.push_back(parse_double(key, item));
  } else if (key == "equilibrium_tolerance") {
    config.equilibrium_tolerance = parse_double(key, value);
  } else if (key == "scan_center_hz") {
    if (value == "auto")
      config.scan_center_hz.reset();
    else
      config.scan_center_hz = parse_double(key, value);
  } else if (key == "scan_span_hz") {
    if (value == "auto")
      config.scan_span_hz.reset();
    else
      config.scan_span_hz = parse_double(key, value);
  } else if (key == "scan_points") {
    config.scan_points = parse_int(key, value);
  } else if (key == "time_modes") {
    config.time_modes = split_list(value);
  } else if (key == "time_points") {
    config.time_points = parse_int(key, value);
  } else if (key == "time_stop_rad") {
    if (value == "auto")
      config.time_stop_rad.reset();
    else
      config.time_stop_rad = parse_double(key, value);
  } else if (key == "trap_span_hz") {
    config.trap_span_hz = parse_double(key, value);
  } else if (key == "trap_points") {
    config.trap_points = parse_int(key, value);
  } else if (key == "rabi_eps_start") {
    config.rabi_eps_start = parse_double(key, value);
  } else if (key == "rabi_eps_stop") {
    config.rabi_eps_stop = parse_double(key, value);
  } else if (key == "rabi_points") {
    config.rabi_points = parse_int(key, value);
  } else if (key == "rabi_scale") {
    config.rabi_scale = value;
  } else if (key == "ideal_gate") {
    config.ideal_gate_mode = parse_bool(key, value);
  } else if (key == "threads") {
    config.threads = parse_int(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

void validate(const ExperimentConfig& config) {
  if (config.ion_mass_u <= 0.0) throw ConfigError("ion_mass_u must be positive");
  if (config.charge_number < 1) throw ConfigError("charge_number must be >= 1");
  if (config.raman_wavelength_m <= 0.0)
    throw ConfigError("raman_wavelength_m must be positive");
  mode_index_from_name(config.mode);
  for (const auto& mode : config.time_modes) mode_index_from_name(mode);
  if (config.distance_parameter < 1) throw ConfigError("distance_parameter must be >= 1");
  if (config.detuning_hz == 0.0) throw ConfigError("detuning_hz must be nonzero");
  if (config.gate_loops < 1) throw ConfigError("gate_loops must be >= 1");
  if (config.rabi_hz && *config.rabi_hz < 0.0)
    throw ConfigError("rabi_hz must be nonnegative (sign convention is Omega_up = -Omega_down)");
  if (!config.illumination_eps.empty() && config.illumination_eps.size() != 4)
    throw ConfigError("illumination_eps needs one entry per ion (four)");
  for (double eps : config.illumination_eps) {
    if (eps <= -1.0) throw ConfigError("illumination_eps entries must exceed -1");
  }
  if (config.equilibrium_tolerance <= 0.0)
    throw ConfigError("equilibrium_tolerance must be positive");
  if (config.scan_span_hz && *config.scan_span_hz <= 0.0)
    throw ConfigError("scan_span_hz must be positive");
  if (config.scan_points < 2) throw ConfigError("scan_points must be >= 2");
  if (config.time_points < 2) throw ConfigError("time_points must be >= 2");
  if (config.time_stop_rad && *config.time_stop_rad <= 0.0)
    throw ConfigError("time_stop_rad must be positive");
  if (config.trap_span_hz <= 0.0) throw ConfigError("trap_span_hz must be positive");
  if (config.trap_points < 2) throw ConfigError("trap_points must be >= 2");
  if (config.rabi_points < 2) throw ConfigError("rabi_points must be >= 2");
  if (config.rabi_eps_start >= config.rabi_eps_stop)
    throw ConfigError("rabi_eps_start must be below rabi_eps_stop");
  if (config.rabi_eps_start <= -0.5 || config.rabi_eps_stop >= 0.5)
    throw ConfigError("rabi deviation range must stay within (-0.5, 0.5)");
  if (config.rabi_scale != "linear" && config.rabi_scale != "log")
    throw ConfigError("rabi_scale must be 'linear' or 'log'");
  if (config.rabi_scale == "log" && config.rabi_eps_start <= 0.0)
    throw ConfigError("log-scale rabi sweeps need a positive start");
  if (config.threads < 1) throw ConfigError("threads must be >= 1");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config;
  std::stringstream stream(text);
  std::string line;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_number) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line_number) + ": empty key");
    apply_key(config, key, value);
  }
  validate(config);
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_config_text(buffer.str());
}

int mode_index_from_name(const std::string& name) {
  if (name == "com") return 0;
  if (name == "breathing") return 1;
  if (name == "e") return 2;
  if (name == "fourth") return 3;
  throw ConfigError("unknown mode '" + name + "' (expected com|breathing|e|fourth)");
}

std::string mode_name_from_index(int index) {
  switch (index) {
    case 0: return "com";
    case 1: return "breathing";
    case 2: return "e";
    case 3: return "fourth";
    default: throw ConfigError("mode index out of range");
  }
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += items[i];
  }
  return out;
}

}  // namespace

std::string resolved_config_string(const ExperimentConfig& c) {
  std::vector<std::string> eps;
  for (double e : c.illumination_eps) eps.push_back(fmt(e));
  std::string out;
  out += "ion_mass_u=" + fmt(c.ion_mass_u);
  out += " charge_number=" + std::to_string(c.charge_number);
  out += " raman_wavelength_m=" + fmt(c.raman_wavelength_m);
  out += " mode=" + c.mode;
  out += " distance_parameter=" + std::to_string(c.distance_parameter);
  out += " detuning_hz=" + fmt(c.detuning_hz);
  out += " gate_loops=" + std::to_string(c.gate_loops);
  out += " rabi_hz=" + (c.rabi_hz ? fmt(*c.rabi_hz) : std::string("auto"));
  out += " phase_difference_rad=" + fmt(c.phase_difference_rad);
  out += " stark_up_hz=" + fmt(c.stark_up_hz);
  out += " stark_down_hz=" + fmt(c.stark_down_hz);
  out += " illumination_eps=" + join(eps);
  out += " equilibrium_tolerance=" + fmt(c.equilibrium_tolerance);
  out += " scan_center_hz=" + (c.scan_center_hz ? fmt(*c.scan_center_hz) : std::string("auto"));
  out += " scan_span_hz=" + (c.scan_span_hz ? fmt(*c.scan_span_hz) : std::string("auto"));
  out += " scan_points=" + std::to_string(c.scan_points);
  out += " time_modes=" + join(c.time_modes);
  out += " time_points=" + std::to_string(c.time_points);
  out += " time_stop_rad=" + (c.time_stop_rad ? fmt(*c.time_stop_rad) : std::string("auto"));
  out += " trap_span_hz=" + fmt(c.trap_span_hz);
  out += " trap_points=" + std::to_string(c.trap_points);
  out += " rabi_eps_start=" + fmt(c.rabi_eps_start);
  out += " rabi_eps_stop=" + fmt(c.rabi_eps_stop);
  out += " rabi_points=" + std::to_string(c.rabi_points);
  out += " rabi_scale=" + c.rabi_scale;
  out += " ideal_gate=" + std::string(c.ideal_gate_mode ? "true" : "false");
  out += " threads=" + std::to_string(c.threads);
  return out;
}

}  // namespace dfsgate
