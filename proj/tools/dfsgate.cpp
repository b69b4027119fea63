#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dfsgate/config.hpp"
#include "dfsgate/constants.hpp"
#include "dfsgate/experiments.hpp"

namespace {

using namespace dfsgate;

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::string mode;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "configuration file (key = value)");
  cmd->add_option("--out", args.out_path, "CSV output path");
  cmd->add_option("--mode", args.mode, "mediating mode: com|breathing|e|fourth")
      ->check(CLI::IsMember({"com", "breathing", "e", "fourth"}));
  cmd->add_option("--threads", args.threads, "worker threads for sweep grids")
      ->check(CLI::PositiveNumber);
}

ExperimentConfig load_config(const CommonArgs& args) {
  ExperimentConfig config;
  if (!args.config_path.empty()) config = parse_config_file(args.config_path);
  if (!args.mode.empty()) {
    mode_index_from_name(args.mode);
    config.mode = args.mode;
    config.time_modes = {args.mode};
  }
  if (args.threads > 0) config.threads = args.threads;
  return config;
}

void maybe_write(const SweepTable& table, const std::string& path) {
  if (!path.empty()) write_csv_file(table, path);
}

void print_point(const WorkingPoint& wp) {
  std::printf("mode            : %s (p = %d)\n", wp.mode_name.c_str(),
              wp.mediating + 1);
  std::printf("omega_z / 2pi   : %.6f MHz\n",
              wp.crystal.trap_frequency / constants::two_pi / 1e6);
  std::printf("length scale l  : %.6f um\n", wp.crystal.length_scale * 1e6);
  std::printf("Omega / 2pi     : %.4f kHz\n",
              wp.omega_rabi / constants::two_pi / 1e3);
}

int cmd_tune(const CommonArgs& args) {
  const ExperimentConfig config = load_config(args);
  const TuneReport report = run_tune(config);
  print_point(report.point);
  std::printf("infidelity      : %.6e\n", 1.0 - report.gate.fidelity);
  std::printf("%4s %12s %16s %14s\n", "p", "mu", "omega_p/2pi (Hz)", "z_p (m)");
  for (const auto& row : report.table.rows)
    std::printf("%4.0f %12.6f %16.1f %14.6e\n", row[0], row[1], row[2], row[3]);
  maybe_write(report.table, args.out_path);
  return 0;
}

int cmd_gate(const CommonArgs& args) {
  const ExperimentConfig config = load_config(args);
  const GateRunReport report = run_gate(config);
  print_point(report.point);
  std::printf("fidelity        : %.9f\n", report.gate.fidelity);
  std::printf("infidelity      : %.6e\n", 1.0 - report.gate.fidelity);
  std::printf("leakage         : %.6e\n", report.gate.leakage);
  for (int i = 0; i < 4; ++i) {
    std::printf("state %s     : |alpha|_rss = %.4e, phase error = %+.4e rad\n",
                spin_label(dfs_basis[i], 4).c_str(),
                report.gate.residual_displacement[i], report.gate.phase_error[i]);
  }
  maybe_write(report.table, args.out_path);
  return 0;
}

int cmd_sweep_time(const CommonArgs& args) {
  const ExperimentConfig config = load_config(args);
  const TimeSweepReport report = run_sweep_time(config);
  for (const auto& wp : report.points) print_point(wp);
  std::printf("%zu grid points over delta*t in [%.3f, %.3f] rad\n",
              report.table.rows.size(), report.table.rows.front()[0],
              report.table.rows.back()[0]);
  maybe_write(report.table, args.out_path);
  return 0;
}

int cmd_sweep_trap(const CommonArgs& args) {
  const ExperimentConfig config = load_config(args);
  const TrapSweepReport report = run_sweep_trap(config);
  print_point(report.point);
  std::printf("F > 0.99 plateau: %.1f kHz  [%.4f, %.4f] MHz\n",
              report.plateau_width_hz / 1e3, report.plateau_low_hz / 1e6,
              report.plateau_high_hz / 1e6);
  maybe_write(report.table, args.out_path);
  return 0;
}

int cmd_sweep_rabi(const CommonArgs& args) {
  const ExperimentConfig config = load_config(args);
  const RabiSweepReport report = run_sweep_rabi_error(config);
  print_point(report.point);
  std::printf("excess-infidelity log-log slope: %.4f\n", report.loglog_slope);
  maybe_write(report.table, args.out_path);
  return 0;
}

int cmd_cluster(const CommonArgs& args) {
  const ExperimentConfig config = load_config(args);
  const ClusterReport report = run_cluster(config);
  std::printf("path            : %s\n", report.ideal ? "ideal gate" : "physical pulse");
  std::printf("cluster overlap : %.9f\n", report.overlap);
  std::printf("leakage         : %.6e\n", report.leakage);
  for (int i = 0; i < 4; ++i) {
    std::printf("amp %s       : %+.6f %+.6fi\n", spin_label(dfs_basis[i], 4).c_str(),
                report.projected[i].real(), report.projected[i].imag());
  }
  maybe_write(report.table, args.out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decoherence-free-subspace geometric phase gate on a four-ion crystal"};
  app.require_subcommand(1);

  CommonArgs tune_args, gate_args, time_args, trap_args, rabi_args, cluster_args;
  add_common(app.add_subcommand("tune", "trap tuning and Rabi calibration"), tune_args);
  add_common(app.add_subcommand("gate", "single-point gate fidelity report"), gate_args);
  add_common(app.add_subcommand("sweep-time", "infidelity against delta*t"), time_args);
  add_common(app.add_subcommand("sweep-trap", "fidelity against omega_z, plateau width"),
             trap_args);
  add_common(app.add_subcommand("sweep-rabi-error",
                                "infidelity against a common Rabi deviation"),
             rabi_args);
  add_common(app.add_subcommand("cluster", "four-qubit cluster state construction"),
             cluster_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand("tune")) return cmd_tune(tune_args);
    if (app.got_subcommand("gate")) return cmd_gate(gate_args);
    if (app.got_subcommand("sweep-time")) return cmd_sweep_time(time_args);
    if (app.got_subcommand("sweep-trap")) return cmd_sweep_trap(trap_args);
    if (app.got_subcommand("sweep-rabi-error")) return cmd_sweep_rabi(rabi_args);
    if (app.got_subcommand("cluster")) return cmd_cluster(cluster_args);
  } catch (const dfsgate::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
