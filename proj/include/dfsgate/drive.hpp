#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "dfsgate/ion_crystal.hpp"

namespace dfsgate {

enum class Spin { up, down };

// Bichromatic Raman drive addressing the whole string.  The drive is
// parameterized directly by the differential shifts Omega_up / Omega_down and
// the static shifts chi_up / chi_down; per-ion illumination factors 1 + eps_i
// scale both.
struct DriveConfig {
  double delta_k = 0.0;           // wave-vector difference along the axis, rad/m
  double phase_difference = 0.0;  // Delta phi between the two fields, rad
  double detuning = 0.0;          // delta from the mediating mode, rad/s, nonzero
  int mediating_mode = 2;         // 0-based mode index (2 = E-mode for 4 ions)
  double rabi_up = 0.0;           // Omega_up, rad/s, signed
  double rabi_down = 0.0;         // Omega_down, rad/s, signed
  Eigen::VectorXd illumination_factors;  // 1 + eps_i; empty means uniform
  double stark_up = 0.0;          // chi_up, rad/s
  double stark_down = 0.0;        // chi_down, rad/s
};

struct TrapTuning {
  double length_scale = 0.0;    // m
  double trap_frequency = 0.0;  // rad/s
};

class CalibrationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

void validate_drive(const IonCrystal& crystal, const DriveConfig& drive);

double illumination_factor(const DriveConfig& drive, int ion);

// Spin-dependent differential shift seen by one ion, Omega_spin (1 + eps_i).
double differential_shift(const DriveConfig& drive, Spin spin, int ion);

// Static shift seen by one ion, chi_spin (1 + eps_i).
double stark_shift(const DriveConfig& drive, Spin spin, int ion);

// Position-dependent drive phases zeta_i = delta_k l u_i - delta_phi,
// deliberately not reduced mod 2 pi.
Eigen::VectorXd site_phases(const IonCrystal& crystal, const DriveConfig& drive);

// Spin-dependent force amplitude on mode p,
//   F = hbar delta_k sum_i b_i^(p) Omega_{s_i} (1 + eps_i) e^{i zeta_i}.
std::complex<double> spin_force(const IonCrystal& crystal, const NormalModes& modes,
                                const DriveConfig& drive, int spin_config, int mode);

// Distance condition for the four-ion E-mode gate: choose l so that
// delta_k l (u3 - u1) = 2 pi n (then also delta_k l (u4 - u2) = 2 pi n by
// mirror symmetry), and invert the length-scale relation for omega_z.
// delta_k = 2 sqrt(2) pi / lambda.
TrapTuning tune_trap(const IonSpecies& species, int distance_parameter);

// One period of the closed phase-space loop, 2 pi / |delta|.
double gate_time(const DriveConfig& drive);

// |Omega| such that, with Omega_up = -Omega_down = |Omega| and everything
// else as in `drive`, the driven DFS states (duud / uddu) pick up geometric
// phase `target_phase` after one loop.  Fails if the driven-state force
// vanishes at this working point or if the two driven forces differ.
double calibrate_rabi(const IonCrystal& crystal, const NormalModes& modes,
                      const DriveConfig& drive, double target_phase);

}  // namespace dfsgate
