#include "dfsgate/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dfsgate/constants.hpp"
#include "dfsgate/spin.hpp"

namespace dfsgate {

namespace {

std::string fmt_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

IonSpecies species_from_config(const ExperimentConfig& config) {
  IonSpecies species;
  species.mass = config.ion_mass_u * constants::atomic_mass_unit;
  species.charge_number = config.charge_number;
  species.raman_wavelength = config.raman_wavelength_m;
  return species;
}

DriveConfig base_drive(const ExperimentConfig& config, int mediating) {
  DriveConfig drive;
  drive.delta_k =
      2.0 * std::sqrt(2.0) * constants::pi / config.raman_wavelength_m;
  drive.phase_difference = config.phase_difference_rad;
  drive.detuning = constants::two_pi * config.detuning_hz;
  drive.mediating_mode = mediating;
  drive.stark_up = constants::two_pi * config.stark_up_hz;
  drive.stark_down = constants::two_pi * config.stark_down_hz;
  if (!config.illumination_eps.empty()) {
    drive.illumination_factors.resize(
        static_cast<Eigen::Index>(config.illumination_eps.size()));
    for (size_t i = 0; i < config.illumination_eps.size(); ++i)
      drive.illumination_factors[static_cast<Eigen::Index>(i)] =
          1.0 + config.illumination_eps[i];
  }
  return drive;
}

struct GatePoint {
  IonCrystal crystal;
  NormalModes modes;
  DriveConfig drive;
  double omega_rabi = 0.0;
};

// Builds crystal, modes and a drive at the given omega_z, calibrating the
// Rabi frequency unless the configuration pins it.
GatePoint gate_point_at(const ExperimentConfig& config, int mediating,
                        double trap_frequency) {
  GatePoint gp;
  gp.crystal = make_crystal(species_from_config(config), 4, trap_frequency,
                            config.equilibrium_tolerance);
  gp.modes = normal_modes(gp.crystal);
  gp.drive = base_drive(config, mediating);
  if (config.rabi_hz) {
    gp.omega_rabi = constants::two_pi * *config.rabi_hz;
  } else {
    const double target = 0.5 * constants::pi / config.gate_loops;
    gp.omega_rabi = calibrate_rabi(gp.crystal, gp.modes, gp.drive, target);
  }
  gp.drive.rabi_up = gp.omega_rabi;
  gp.drive.rabi_down = -gp.omega_rabi;
  return gp;
}

GateReport report_at(const ExperimentConfig& config, const GatePoint& gp) {
  const double t = config.gate_loops * gate_time(gp.drive);
  return gate_fidelity(evolve(gp.crystal, gp.modes, gp.drive, t));
}

double default_scan_center_hz(const ExperimentConfig& config, int mediating) {
  switch (mediating) {
    case 1: return 2.86e6;
    case 3: return 2.68e6;
    default: {
      // No tabulated working point; start from the distance-condition trap.
      const TrapTuning t =
          tune_trap(species_from_config(config), config.distance_parameter);
      return t.trap_frequency / constants::two_pi;
    }
  }
}

void parallel_for(long n, int threads, const std::function<void(long)>& body) {
  if (threads <= 1 || n < 2) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      if (failed.load()) return;
      const long i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int count = static_cast<int>(std::min<long>(threads, n));
  pool.reserve(static_cast<size_t>(count));
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> linear_grid(double start, double stop, int points) {
  std::vector<double> xs(static_cast<size_t>(points));
  for (int i = 0; i < points; ++i)
    xs[static_cast<size_t>(i)] =
        start + (stop - start) * static_cast<double>(i) / (points - 1);
  return xs;
}

std::vector<double> log_grid(double start, double stop, int points) {
  const double la = std::log(start);
  const double lb = std::log(stop);
  std::vector<double> xs(static_cast<size_t>(points));
  for (int i = 0; i < points; ++i)
    xs[static_cast<size_t>(i)] =
        std::exp(la + (lb - la) * static_cast<double>(i) / (points - 1));
  return xs;
}

void append_report_columns(std::vector<std::string>& columns) {
  for (int i = 0; i < 4; ++i)
    columns.push_back("alpha_rss_" + spin_label(dfs_basis[i], 4));
  for (int i = 0; i < 4; ++i)
    columns.push_back("phase_error_" + spin_label(dfs_basis[i], 4));
}

void append_report_values(std::vector<double>& row, const GateReport& report) {
  for (int i = 0; i < 4; ++i) row.push_back(report.residual_displacement[i]);
  for (int i = 0; i < 4; ++i) row.push_back(report.phase_error[i]);
}

// Signed mediating-mode force on udud at unit drive and zero field-phase
// difference.  With the mirror-symmetric crystal this force lies on a fixed
// axis (real for antisymmetric modes, imaginary for symmetric ones), so the
// combined component tracks its sign and vanishes exactly where |F| does.
double unphased_force_component(const ExperimentConfig& config, int mediating,
                                double trap_frequency) {
  const IonCrystal crystal = make_crystal(species_from_config(config), 4,
                                          trap_frequency,
                                          config.equilibrium_tolerance);
  const NormalModes modes = normal_modes(crystal);
  DriveConfig unit = base_drive(config, mediating);
  unit.phase_difference = 0.0;
  unit.rabi_up = 1.0;
  unit.rabi_down = -1.0;
  const std::complex<double> f =
      spin_force(crystal, modes, unit, dfs_basis[0], mediating);
  return (f.real() + f.imag()) / (constants::hbar * unit.delta_k);
}

// Unit-drive force on the first driven state, in units of hbar dk; a
// cancellation point is degenerate when this also vanishes there.
double driven_force_magnitude(const ExperimentConfig& config, int mediating,
                              double trap_frequency) {
  const IonCrystal crystal = make_crystal(species_from_config(config), 4,
                                          trap_frequency,
                                          config.equilibrium_tolerance);
  const NormalModes modes = normal_modes(crystal);
  DriveConfig unit = base_drive(config, mediating);
  unit.rabi_up = 1.0;
  unit.rabi_down = -1.0;
  return std::abs(spin_force(crystal, modes, unit, dfs_basis[1], mediating)) /
         (constants::hbar * unit.delta_k);
}

}  // namespace

TrapTuning tune_trap_for_mode(const ExperimentConfig& config, int mediating,
                              double center_hz, double span_hz, int points) {
  if (points < 2) throw std::invalid_argument("scan needs at least two points");
  const auto xs = linear_grid(center_hz - 0.5 * span_hz, center_hz + 0.5 * span_hz,
                              points);
  std::vector<double> gs(xs.size());
  for (size_t i = 0; i < xs.size(); ++i)
    gs[i] = unphased_force_component(config, mediating, constants::two_pi * xs[i]);

  // Bracketed roots ordered by distance from the requested center.
  struct Bracket {
    double lo, hi, distance;
  };
  std::vector<Bracket> brackets;
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    if (gs[i] == 0.0) {
      brackets.push_back({xs[i], xs[i], std::abs(xs[i] - center_hz)});
    } else if (gs[i] * gs[i + 1] < 0.0) {
      const double mid = 0.5 * (xs[i] + xs[i + 1]);
      brackets.push_back({xs[i], xs[i + 1], std::abs(mid - center_hz)});
    }
  }
  std::sort(brackets.begin(), brackets.end(),
            [](const Bracket& a, const Bracket& b) { return a.distance < b.distance; });
  if (brackets.empty())
    throw CalibrationError("no force-cancellation point inside the scan window");

  for (const Bracket& bracket : brackets) {
    double lo = bracket.lo;
    double hi = bracket.hi;
    double g_lo = lo == hi ? 0.0
                           : unphased_force_component(config, mediating,
                                                      constants::two_pi * lo);
    for (int iter = 0; iter < 100 && hi - lo > 1e-9; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const double g_mid =
          unphased_force_component(config, mediating, constants::two_pi * mid);
      if (g_mid == 0.0) {
        lo = hi = mid;
        break;
      }
      if (g_lo * g_mid < 0.0) {
        hi = mid;
      } else {
        lo = mid;
        g_lo = g_mid;
      }
    }
    const double omega = constants::two_pi * 0.5 * (lo + hi);
    // Skip degenerate roots where the driven pair decouples as well.
    if (driven_force_magnitude(config, mediating, omega) < 1e-3) continue;
    TrapTuning tuning;
    tuning.trap_frequency = omega;
    tuning.length_scale = length_scale(species_from_config(config), omega);
    return tuning;
  }
  throw CalibrationError(
      "every cancellation point in the scan window also kills the driven force");
}

WorkingPoint setup_working_point(const ExperimentConfig& config) {
  return setup_working_point(config, mode_index_from_name(config.mode));
}

WorkingPoint setup_working_point(const ExperimentConfig& config, int mediating) {
  TrapTuning tuning;
  if (mediating == 2) {
    tuning = tune_trap(species_from_config(config), config.distance_parameter);
  } else {
    const double center =
        config.scan_center_hz.value_or(default_scan_center_hz(config, mediating));
    // the untabulated center-of-mass gate needs a wider default search
    const double span = config.scan_span_hz.value_or(mediating == 0 ? 600e3 : 100e3);
    tuning = tune_trap_for_mode(config, mediating, center, span, config.scan_points);
  }
  const GatePoint gp = gate_point_at(config, mediating, tuning.trap_frequency);
  WorkingPoint wp;
  wp.mode_name = mode_name_from_index(mediating);
  wp.mediating = mediating;
  wp.crystal = gp.crystal;
  wp.modes = gp.modes;
  wp.drive = gp.drive;
  wp.omega_rabi = gp.omega_rabi;
  return wp;
}

void write_csv(const SweepTable& table, std::ostream& out) {
  for (const auto& comment : table.comments) out << "# " << comment << "\n";
  for (size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out << ",";
    out << table.columns[c];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out << ",";
      out << fmt_g12(row[c]);
    }
    out << "\n";
  }
}

void write_csv_file(const SweepTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  write_csv(table, out);
}

std::string csv_string(const SweepTable& table) {
  std::ostringstream out;
  write_csv(table, out);
  return out.str();
}

TuneReport run_tune(const ExperimentConfig& config) {
  TuneReport report;
  report.point = setup_working_point(config);
  const GatePoint gp{report.point.crystal, report.point.modes, report.point.drive,
                     report.point.omega_rabi};
  report.gate = report_at(config, gp);

  report.table.comments.push_back(resolved_config_string(config));
  report.table.comments.push_back(
      "omega_z_hz=" +
      fmt_g12(report.point.crystal.trap_frequency / constants::two_pi) +
      " length_scale_m=" + fmt_g12(report.point.crystal.length_scale) +
      " omega_rabi_hz=" + fmt_g12(report.point.omega_rabi / constants::two_pi) +
      " infidelity=" + fmt_g12(1.0 - report.gate.fidelity));
  report.table.columns = {"p", "mu", "mode_frequency_hz", "ground_state_spread_m"};
  for (int p = 0; p < report.point.crystal.n_ions; ++p) {
    report.table.rows.push_back(
        {static_cast<double>(p + 1), report.point.modes.eigenvalues[p],
         report.point.modes.frequencies[p] / constants::two_pi,
         report.point.modes.ground_state_spreads[p]});
  }
  return report;
}

GateRunReport run_gate(const ExperimentConfig& config) {
  GateRunReport report;
  report.point = setup_working_point(config);
  const GatePoint gp{report.point.crystal, report.point.modes, report.point.drive,
                     report.point.omega_rabi};
  report.gate = report_at(config, gp);

  report.table.comments.push_back(resolved_config_string(config));
  report.table.comments.push_back(
      "omega_z_hz=" +
      fmt_g12(report.point.crystal.trap_frequency / constants::two_pi) +
      " omega_rabi_hz=" + fmt_g12(report.point.omega_rabi / constants::two_pi));
  report.table.columns = {"fidelity", "infidelity", "leakage"};
  append_report_columns(report.table.columns);
  std::vector<double> row = {report.gate.fidelity, 1.0 - report.gate.fidelity,
                             report.gate.leakage};
  append_report_values(row, report.gate);
  report.table.rows.push_back(row);
  return report;
}

TimeSweepReport run_sweep_time(const ExperimentConfig& config) {
  TimeSweepReport report;
  for (const auto& name : config.time_modes)
    report.points.push_back(
        setup_working_point(config, mode_index_from_name(name)));

  const double stop =
      config.time_stop_rad.value_or(constants::two_pi * config.gate_loops);
  const auto xs = linear_grid(0.0, stop, config.time_points);

  report.table.comments.push_back(resolved_config_string(config));
  report.table.columns = {"delta_t_rad"};
  std::string points_comment;
  for (const auto& wp : report.points) {
    report.table.columns.push_back("infidelity_" + wp.mode_name);
    if (!points_comment.empty()) points_comment += " ";
    points_comment += wp.mode_name + ":omega_z_hz=" +
                      fmt_g12(wp.crystal.trap_frequency / constants::two_pi) +
                      ",omega_rabi_hz=" + fmt_g12(wp.omega_rabi / constants::two_pi);
  }
  report.table.comments.push_back(points_comment);

  report.table.rows.assign(xs.size(), {});
  parallel_for(static_cast<long>(xs.size()), config.threads, [&](long i) {
    const auto idx = static_cast<size_t>(i);
    std::vector<double> row = {xs[idx]};
    for (const auto& wp : report.points) {
      const double t = xs[idx] / std::abs(wp.drive.detuning);
      const GateReport gr = gate_fidelity(evolve(wp.crystal, wp.modes, wp.drive, t));
      row.push_back(1.0 - gr.fidelity);
    }
    report.table.rows[idx] = std::move(row);
  });
  return report;
}

TrapSweepReport run_sweep_trap(const ExperimentConfig& config) {
  TrapSweepReport report;
  report.point = setup_working_point(config);
  const double center_hz =
      report.point.crystal.trap_frequency / constants::two_pi;
  const auto xs = linear_grid(center_hz - 0.5 * config.trap_span_hz,
                              center_hz + 0.5 * config.trap_span_hz,
                              config.trap_points);

  std::vector<GateReport> reports(xs.size());
  parallel_for(static_cast<long>(xs.size()), config.threads, [&](long i) {
    const auto idx = static_cast<size_t>(i);
    reports[idx] = report_at(
        config, gate_point_at(config, report.point.mediating,
                              constants::two_pi * xs[idx]));
  });

  std::vector<double> fidelities(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) fidelities[i] = reports[i].fidelity;
  const PlateauResult plateau = plateau_width(xs, fidelities, 0.99);
  report.plateau_width_hz = plateau.width;
  report.plateau_low_hz = plateau.low;
  report.plateau_high_hz = plateau.high;

  report.table.comments.push_back(resolved_config_string(config));
  report.table.comments.push_back(
      "center_omega_z_hz=" + fmt_g12(center_hz) +
      " plateau_width_hz=" + fmt_g12(plateau.width) +
      " plateau_low_hz=" + fmt_g12(plateau.low) +
      " plateau_high_hz=" + fmt_g12(plateau.high));
  report.table.columns = {"omega_z_hz", "fidelity", "infidelity"};
  append_report_columns(report.table.columns);
  for (size_t i = 0; i < xs.size(); ++i) {
    std::vector<double> row = {xs[i], reports[i].fidelity, 1.0 - reports[i].fidelity};
    append_report_values(row, reports[i]);
    report.table.rows.push_back(row);
  }
  return report;
}

RabiSweepReport run_sweep_rabi_error(const ExperimentConfig& config) {
  RabiSweepReport report;
  report.point = setup_working_point(config);
  const double t = config.gate_loops * gate_time(report.point.drive);
  const EvolutionResult reference =
      evolve(report.point.crystal, report.point.modes, report.point.drive, t);

  const auto xs = config.rabi_scale == "log"
                      ? log_grid(config.rabi_eps_start, config.rabi_eps_stop,
                                 config.rabi_points)
                      : linear_grid(config.rabi_eps_start, config.rabi_eps_stop,
                                    config.rabi_points);

  std::vector<GateReport> reports(xs.size());
  std::vector<double> excess(xs.size());
  parallel_for(static_cast<long>(xs.size()), config.threads, [&](long i) {
    const auto idx = static_cast<size_t>(i);
    DriveConfig drive = report.point.drive;
    drive.rabi_up *= 1.0 + xs[idx];
    drive.rabi_down *= 1.0 + xs[idx];
    const EvolutionResult result =
        evolve(report.point.crystal, report.point.modes, drive, t);
    reports[idx] = gate_fidelity(result);
    excess[idx] = 1.0 - relative_gate_fidelity(result, reference);
  });

  // The fitted power law concerns the deviation-induced infidelity (gate at
  // epsilon against the unperturbed gate); the absolute infidelity carries an
  // epsilon-independent off-resonant floor.
  std::vector<double> fit_x;
  std::vector<double> fit_y;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] > 0.0 && excess[i] > 0.0) {
      fit_x.push_back(xs[i]);
      fit_y.push_back(excess[i]);
    }
  }
  report.loglog_slope =
      fit_x.size() >= 2 ? fit_loglog_slope(fit_x, fit_y)
                        : std::numeric_limits<double>::quiet_NaN();

  report.table.comments.push_back(resolved_config_string(config));
  report.table.comments.push_back(
      "omega_rabi_hz=" + fmt_g12(report.point.omega_rabi / constants::two_pi) +
      " excess_infidelity_loglog_slope=" + fmt_g12(report.loglog_slope));
  report.table.columns = {"epsilon", "fidelity", "infidelity", "excess_infidelity"};
  append_report_columns(report.table.columns);
  for (size_t i = 0; i < xs.size(); ++i) {
    std::vector<double> row = {xs[i], reports[i].fidelity,
                               1.0 - reports[i].fidelity, excess[i]};
    append_report_values(row, reports[i]);
    report.table.rows.push_back(row);
  }
  return report;
}

ClusterReport run_cluster(const ExperimentConfig& config) {
  ClusterReport report;
  report.ideal = config.ideal_gate_mode;
  const Eigen::Vector4cd target = make_cluster().amplitudes;

  if (config.ideal_gate_mode) {
    report.projected = target;
    report.overlap = 1.0;
    report.leakage = 0.0;
  } else {
    const WorkingPoint wp = setup_working_point(config);
    const double t = config.gate_loops * gate_time(wp.drive);
    const EvolutionResult result = evolve(wp.crystal, wp.modes, wp.drive, t);
    // Bell-pair product input: amplitude 1/2 on each DFS component.  After
    // the pulse each component keeps its spin label, acquires a phase, and
    // drags its motional state; projecting back onto the motional vacuum
    // leaves the DFS amplitudes below.
    for (int i = 0; i < 4; ++i) {
      const SpinEvolution& ev = result.configs[dfs_basis[i]];
      report.projected[i] = 0.5 * std::sqrt(vacuum_weight(ev)) *
                            std::polar(1.0, ev.total_phase);
    }
    report.overlap = std::norm(target.dot(report.projected));
    report.leakage = 1.0 - report.projected.squaredNorm();
  }

  report.table.comments.push_back(resolved_config_string(config));
  report.table.columns = {"overlap", "leakage"};
  for (int i = 0; i < 4; ++i) {
    const std::string label = spin_label(dfs_basis[i], 4);
    report.table.columns.push_back("amp_re_" + label);
    report.table.columns.push_back("amp_im_" + label);
  }
  std::vector<double> row = {report.overlap, report.leakage};
  for (int i = 0; i < 4; ++i) {
    row.push_back(report.projected[i].real());
    row.push_back(report.projected[i].imag());
  }
  report.table.rows.push_back(row);
  return report;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("slope fit needs matching samples, at least two");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0)
      throw std::invalid_argument("slope fit needs positive samples");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

PlateauResult plateau_width(const std::vector<double>& x, const std::vector<double>& y,
                            double threshold) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("plateau search needs matching samples");
  PlateauResult best;
  size_t i = 0;
  const size_t n = x.size();
  while (i < n) {
    if (y[i] <= threshold) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j + 1 < n && y[j + 1] > threshold) ++j;
    // Linear interpolation at both crossings; window edges clamp.
    double low = x[i];
    if (i > 0) {
      const double f = (threshold - y[i - 1]) / (y[i] - y[i - 1]);
      low = x[i - 1] + f * (x[i] - x[i - 1]);
    }
    double high = x[j];
    if (j + 1 < n) {
      const double f = (threshold - y[j]) / (y[j + 1] - y[j]);
      high = x[j] + f * (x[j + 1] - x[j]);
    }
    if (high - low > best.width) {
      best.width = high - low;
      best.low = low;
      best.high = high;
    }
    i = j + 1;
  }
  return best;
}

}  // namespace dfsgate
