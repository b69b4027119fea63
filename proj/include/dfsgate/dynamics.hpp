#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

#include "dfsgate/drive.hpp"
#include "dfsgate/ion_crystal.hpp"

namespace dfsgate {

class ResonanceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Closed-form response of one mode to the drive F e^{i delta_p t} a^dag + h.c.
// (detuning convention chosen so a full loop leaves positive geometric phase):
//   alpha(t) = (F z_p / hbar delta_p) (1 - e^{i delta_p t})
//   Phi(t)   = |F z_p / hbar delta_p|^2 (delta_p t - sin delta_p t)
struct ModeResponse {
  std::complex<double> displacement;  // alpha, dimensionless
  double phase = 0.0;                 // Phi, rad (signed with delta_p)
};

// Throws ResonanceError for delta_p = 0: on resonance the displacement grows
// linearly and the closed form does not apply.
ModeResponse mode_response(std::complex<double> force, double spread,
                           double mode_detuning, double time);

// delta for the mediating mode, omega_p - omega_mediating - delta otherwise.
double mode_detuning(const NormalModes& modes, const DriveConfig& drive, int mode);

struct SpinEvolution {
  double total_phase = 0.0;      // sum_p Phi_p - Stark phase
  double geometric_phase = 0.0;  // sum_p Phi_p
  double stark_phase = 0.0;      // sum_i chi_{s_i} (1 + eps_i) t
  Eigen::VectorXcd displacements;  // alpha per mode
};

struct EvolutionResult {
  std::vector<SpinEvolution> configs;  // indexed by spin configuration
  double time = 0.0;
  int n_ions = 0;
};

// Exact evolution of every spin configuration under the drive: the spin basis
// is unmixed, each configuration acquires per-mode coherent displacements and
// a scalar phase.
EvolutionResult evolve(const IonCrystal& crystal, const NormalModes& modes,
                       const DriveConfig& drive, double time);

// Probability that a spin configuration is found with all modes still in the
// ground state, prod_p e^{-|alpha_p|^2}.
double vacuum_weight(const SpinEvolution& config);

struct GateReport {
  double fidelity = 0.0;
  double leakage = 0.0;  // mean motional excitation probability over the DFS
  std::array<double, 4> residual_displacement{};  // sqrt(sum_p |alpha_p|^2) per DFS state
  std::array<double, 4> phase_error{};  // vs diag(1, i, i, 1), global phase removed
};

// DFS gate fidelity F = 1/16 |sum_i e^{i(theta_i - theta_i^ideal)} w_i|^2 with
// w_i the motional vacuum overlap; the modulus removes the global phase.
GateReport gate_fidelity(const EvolutionResult& result);

// Fidelity of `actual` relative to `reference` (same drive geometry, e.g. a
// Rabi-deviated gate against the unperturbed one), using the coherent-state
// overlaps <alpha_ref|alpha_act> per mode.  1 at actual == reference.
double relative_gate_fidelity(const EvolutionResult& actual,
                              const EvolutionResult& reference);

}  // namespace dfsgate
