#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "dfsgate/config.hpp"
#include "dfsgate/dfs_logic.hpp"
#include "dfsgate/drive.hpp"
#include "dfsgate/dynamics.hpp"
#include "dfsgate/ion_crystal.hpp"

namespace dfsgate {

// A fully resolved gate configuration: tuned trap, normal modes, calibrated
// (or user-set) drive.
struct WorkingPoint {
  std::string mode_name;
  int mediating = 2;
  IonCrystal crystal;
  NormalModes modes;
  DriveConfig drive;
  double omega_rabi = 0.0;  // rad/s, the |Omega| actually installed
};

// Trap frequency near center_hz at which the mediating-mode force on the
// unphased DFS states (udud / dudu) cancels: the distance condition
// generalized to any mediating mode.  A sign change is bracketed on a grid
// over [center - span/2, center + span/2] and bisected; when several exist
// the one nearest the center wins.
TrapTuning tune_trap_for_mode(const ExperimentConfig& config, int mediating,
                              double center_hz, double span_hz, int points);

WorkingPoint setup_working_point(const ExperimentConfig& config);
WorkingPoint setup_working_point(const ExperimentConfig& config, int mediating);

// --------------------------------------------------------------------------
// Tabular results.  CSV format: '#' comment line with the resolved
// configuration (plus any derived summary lines), a header row, then data
// rows; 12 significant digits, ',' separator, LF line endings.
// --------------------------------------------------------------------------

struct SweepTable {
  std::vector<std::string> comments;  // without the leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_csv(const SweepTable& table, std::ostream& out);
void write_csv_file(const SweepTable& table, const std::string& path);
std::string csv_string(const SweepTable& table);

struct TuneReport {
  WorkingPoint point;
  GateReport gate;
  SweepTable table;  // one row per mode: mu, frequency, spread
};

struct GateRunReport {
  WorkingPoint point;
  GateReport gate;
  SweepTable table;
};

struct TimeSweepReport {
  std::vector<WorkingPoint> points;  // one per column
  SweepTable table;
};

struct TrapSweepReport {
  WorkingPoint point;
  SweepTable table;
  double plateau_width_hz = 0.0;  // widest contiguous F > 0.99 interval
  double plateau_low_hz = 0.0;
  double plateau_high_hz = 0.0;
};

struct RabiSweepReport {
  WorkingPoint point;
  SweepTable table;
  double loglog_slope = 0.0;  // fit of the deviation-induced infidelity
};

struct ClusterReport {
  bool ideal = false;
  double overlap = 0.0;  // |<cluster | projected>|^2
  double leakage = 0.0;
  Eigen::Vector4cd projected;  // DFS amplitudes after vacuum projection
  SweepTable table;
};

TuneReport run_tune(const ExperimentConfig& config);
GateRunReport run_gate(const ExperimentConfig& config);
TimeSweepReport run_sweep_time(const ExperimentConfig& config);
TrapSweepReport run_sweep_trap(const ExperimentConfig& config);
RabiSweepReport run_sweep_rabi_error(const ExperimentConfig& config);
ClusterReport run_cluster(const ExperimentConfig& config);

// Least-squares slope of log(y) against log(x); x and y must be positive.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Width of the largest contiguous interval with y > threshold, edges located
// by linear interpolation between grid points.
struct PlateauResult {
  double width = 0.0;
  double low = 0.0;
  double high = 0.0;
};
PlateauResult plateau_width(const std::vector<double>& x, const std::vector<double>& y,
                            double threshold);

}  // namespace dfsgate
