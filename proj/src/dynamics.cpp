#include "dfsgate/dynamics.hpp"

#include <cmath>
#include <complex>

#include "dfsgate/constants.hpp"
#include "dfsgate/spin.hpp"

namespace dfsgate {

using cplx = std::complex<double>;

ModeResponse mode_response(cplx force, double spread, double mode_detuning,
                           double time) {
  if (mode_detuning == 0.0)
    throw ResonanceError(
        "mode driven on resonance: displacement grows linearly, no closed form");
  const cplx amplitude = force * spread / (constants::hbar * mode_detuning);
  const double x = mode_detuning * time;
  ModeResponse response;
  response.displacement = amplitude * (1.0 - std::polar(1.0, x));
  response.phase = std::norm(amplitude) * (x - std::sin(x));
  return response;
}

double mode_detuning(const NormalModes& modes, const DriveConfig& drive, int mode) {
  if (mode == drive.mediating_mode) return drive.detuning;
  return modes.frequencies[mode] - modes.frequencies[drive.mediating_mode] -
         drive.detuning;
}

EvolutionResult evolve(const IonCrystal& crystal, const NormalModes& modes,
                       const DriveConfig& drive, double time) {
  validate_drive(crystal, drive);
  if (drive.mediating_mode < 0 || drive.mediating_mode >= crystal.n_ions)
    throw std::invalid_argument("mediating mode out of range");
  const int n = crystal.n_ions;
  const int n_configs = 1 << n;

  EvolutionResult result;
  result.time = time;
  result.n_ions = n;
  result.configs.resize(n_configs);

  for (int s = 0; s < n_configs; ++s) {
    SpinEvolution& ev = result.configs[s];
    ev.displacements.resize(n);
    ev.geometric_phase = 0.0;
    for (int p = 0; p < n; ++p) {
      const cplx force = spin_force(crystal, modes, drive, s, p);
      const ModeResponse mr =
          mode_response(force, modes.ground_state_spreads[p],
                        mode_detuning(modes, drive, p), time);
      ev.displacements[p] = mr.displacement;
      ev.geometric_phase += mr.phase;
    }
    double stark = 0.0;
    for (int i = 0; i < n; ++i) {
      const Spin spin = spin_up(s, i, n) ? Spin::up : Spin::down;
      stark += stark_shift(drive, spin, i);
    }
    ev.stark_phase = stark * time;
    ev.total_phase = ev.geometric_phase - ev.stark_phase;
  }
  return result;
}

double vacuum_weight(const SpinEvolution& config) {
  double sum = 0.0;
  for (Eigen::Index p = 0; p < config.displacements.size(); ++p)
    sum += std::norm(config.displacements[p]);
  return std::exp(-sum);
}

namespace {

double wrap_phase(double phase) { return std::remainder(phase, constants::two_pi); }

}  // namespace

GateReport gate_fidelity(const EvolutionResult& result) {
  if (result.n_ions != 4)
    throw std::invalid_argument("the DFS gate is defined on four ions");

  GateReport report;
  cplx sum = 0.0;
  double leak = 0.0;
  std::array<double, 4> dtheta{};
  for (int i = 0; i < 4; ++i) {
    const SpinEvolution& ev = result.configs[dfs_basis[i]];
    double excitation = 0.0;
    for (Eigen::Index p = 0; p < ev.displacements.size(); ++p)
      excitation += std::norm(ev.displacements[p]);
    const double weight = std::exp(-0.5 * excitation);
    dtheta[i] = ev.total_phase - dfs_ideal_phases[i];
    sum += weight * std::polar(1.0, dtheta[i]);
    report.residual_displacement[i] = std::sqrt(excitation);
    leak += 1.0 - std::exp(-excitation);
  }
  report.fidelity = std::norm(sum) / 16.0;
  report.leakage = leak / 4.0;
  const double gauge = std::arg(sum);
  for (int i = 0; i < 4; ++i) report.phase_error[i] = wrap_phase(dtheta[i] - gauge);
  return report;
}

double relative_gate_fidelity(const EvolutionResult& actual,
                              const EvolutionResult& reference) {
  if (actual.n_ions != 4 || reference.n_ions != 4)
    throw std::invalid_argument("the DFS gate is defined on four ions");
  cplx sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    const SpinEvolution& a = actual.configs[dfs_basis[i]];
    const SpinEvolution& r = reference.configs[dfs_basis[i]];
    // <alpha_r | alpha_a> = exp(-|a|^2/2 - |r|^2/2 + conj(r) a) per mode.
    cplx log_overlap = 0.0;
    for (Eigen::Index p = 0; p < a.displacements.size(); ++p) {
      log_overlap += -0.5 * std::norm(a.displacements[p]) -
                     0.5 * std::norm(r.displacements[p]) +
                     std::conj(r.displacements[p]) * a.displacements[p];
    }
    sum += std::exp(log_overlap) *
           std::polar(1.0, a.total_phase - r.total_phase);
  }
  return std::norm(sum) / 16.0;
}

}  // namespace dfsgate
