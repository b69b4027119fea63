#include "dfsgate/drive.hpp"

#include <cmath>

#include "dfsgate/constants.hpp"
#include "dfsgate/spin.hpp"

namespace dfsgate {

void validate_drive(const IonCrystal& crystal, const DriveConfig& drive) {
  if (drive.delta_k <= 0.0) throw std::invalid_argument("delta_k must be positive");
  if (drive.detuning == 0.0) throw std::invalid_argument("detuning must be nonzero");
  const auto n_illum = drive.illumination_factors.size();
  if (n_illum != 0 && n_illum != crystal.n_ions)
    throw std::invalid_argument("illumination factor count does not match the crystal");
  for (Eigen::Index i = 0; i < n_illum; ++i) {
    if (drive.illumination_factors[i] <= 0.0)
      throw std::invalid_argument("illumination factors must be positive");
  }
}

double illumination_factor(const DriveConfig& drive, int ion) {
  if (drive.illumination_factors.size() == 0) return 1.0;
  return drive.illumination_factors[ion];
}

double differential_shift(const DriveConfig& drive, Spin spin, int ion) {
  const double omega = spin == Spin::up ? drive.rabi_up : drive.rabi_down;
  return omega * illumination_factor(drive, ion);
}

double stark_shift(const DriveConfig& drive, Spin spin, int ion) {
  const double chi = spin == Spin::up ? drive.stark_up : drive.stark_down;
  return chi * illumination_factor(drive, ion);
}

Eigen::VectorXd site_phases(const IonCrystal& crystal, const DriveConfig& drive) {
  return (drive.delta_k * crystal.length_scale) * crystal.positions.array() -
         drive.phase_difference;
}

std::complex<double> spin_force(const IonCrystal& crystal, const NormalModes& modes,
                                const DriveConfig& drive, int spin_config, int mode) {
  if (mode < 0 || mode >= crystal.n_ions) throw std::invalid_argument("mode out of range");
  if (spin_config < 0 || spin_config >= (1 << crystal.n_ions))
    throw std::invalid_argument("spin configuration out of range");
  const Eigen::VectorXd zeta = site_phases(crystal, drive);
  std::complex<double> sum = 0.0;
  for (int i = 0; i < crystal.n_ions; ++i) {
    const Spin s = spin_up(spin_config, i, crystal.n_ions) ? Spin::up : Spin::down;
    sum += modes.eigenvectors(i, mode) * differential_shift(drive, s, i) *
           std::polar(1.0, zeta[i]);
  }
  return constants::hbar * drive.delta_k * sum;
}

TrapTuning tune_trap(const IonSpecies& species, int distance_parameter) {
  if (distance_parameter < 1)
    throw std::invalid_argument("distance parameter must be >= 1");
  const Eigen::VectorXd u = equilibrium_positions(4);
  const double delta_k = 2.0 * std::sqrt(2.0) * constants::pi / species.raman_wavelength;
  TrapTuning tuning;
  tuning.length_scale =
      constants::two_pi * distance_parameter / (delta_k * (u[2] - u[0]));
  // Invert l^3 = Z^2 e^2 / (4 pi eps0 M omega_z^2) for omega_z.
  const double q = species.charge_number * constants::elementary_charge;
  const double l3 = std::pow(tuning.length_scale, 3);
  tuning.trap_frequency =
      std::sqrt(q * q / (4.0 * constants::pi * constants::epsilon0 * species.mass * l3));
  return tuning;
}

double gate_time(const DriveConfig& drive) {
  if (drive.detuning == 0.0) throw std::invalid_argument("detuning must be nonzero");
  return constants::two_pi / std::abs(drive.detuning);
}

double calibrate_rabi(const IonCrystal& crystal, const NormalModes& modes,
                      const DriveConfig& drive, double target_phase) {
  validate_drive(crystal, drive);
  if (crystal.n_ions != 4) throw std::invalid_argument("calibration assumes four ions");
  if (target_phase <= 0.0) throw std::invalid_argument("target phase must be positive");
  const int p = drive.mediating_mode;
  if (p < 0 || p >= crystal.n_ions)
    throw std::invalid_argument("mediating mode out of range");

  // Unit drive with the working-point convention Omega_up = -Omega_down.
  DriveConfig unit = drive;
  unit.rabi_up = 1.0;
  unit.rabi_down = -1.0;
  const double f_duud = std::abs(spin_force(crystal, modes, unit, dfs_basis[1], p));
  const double f_uddu = std::abs(spin_force(crystal, modes, unit, dfs_basis[2], p));
  const double scale = constants::hbar * drive.delta_k;
  if (f_duud < 1e-12 * scale)
    throw CalibrationError("driven-state force vanishes at this working point");
  if (std::abs(f_duud - f_uddu) > 1e-9 * f_duud)
    throw CalibrationError("driven DFS states see unequal forces; calibration is ambiguous");

  // One closed loop accumulates Phi = 2 pi |F z_p / hbar delta|^2, and F is
  // linear in |Omega|.
  const double phase_per_unit =
      constants::two_pi *
      std::pow(f_duud * modes.ground_state_spreads[p] /
                   (constants::hbar * drive.detuning),
               2);
  return std::sqrt(target_phase / phase_per_unit);
}

}  // namespace dfsgate
