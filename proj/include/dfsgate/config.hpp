#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dfsgate {

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key = value configuration with # comments.  Frequencies are given in
// Hz ("..._hz" keys) and converted to rad/s where used.
struct ExperimentConfig {
  // species
  double ion_mass_u = 39.9625909;       // 40Ca
  int charge_number = 1;
  double raman_wavelength_m = 397e-9;

  // drive / working point
  std::string mode = "e";               // com | breathing | e | fourth
  int distance_parameter = 15;
  double detuning_hz = 40e3;
  int gate_loops = 1;
  std::optional<double> rabi_hz;        // empty = calibrate automatically
  double phase_difference_rad = 0.0;
  double stark_up_hz = 0.0;
  double stark_down_hz = 0.0;
  std::vector<double> illumination_eps; // one per ion; empty = uniform
  double equilibrium_tolerance = 1e-12;

  // working-point scan (modes without a closed-form tuning condition)
  std::optional<double> scan_center_hz; // empty = built-in default per mode
  std::optional<double> scan_span_hz;   // empty = 100 kHz; 600 kHz for com
  int scan_points = 201;

  // sweeps
  std::vector<std::string> time_modes = {"breathing", "e", "fourth"};
  int time_points = 800;
  std::optional<double> time_stop_rad;  // empty = 2 pi * gate_loops
  double trap_span_hz = 300e3;
  int trap_points = 601;
  double rabi_eps_start = 1e-3;
  double rabi_eps_stop = 0.0316227766016838;  // 10^-1.5
  int rabi_points = 41;
  std::string rabi_scale = "log";       // linear | log

  // cluster
  bool ideal_gate_mode = false;

  int threads = 1;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Mode name <-> 0-based mode index for the four-ion crystal.
int mode_index_from_name(const std::string& name);
std::string mode_name_from_index(int index);

// Canonical "key=value" listing of every effective setting, used in the CSV
// provenance comment; byte-stable for identical configurations.
std::string resolved_config_string(const ExperimentConfig& config);

}  // namespace dfsgate
