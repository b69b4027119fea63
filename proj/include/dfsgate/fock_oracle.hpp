#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

#include "dfsgate/drive.hpp"
#include "dfsgate/ion_crystal.hpp"

namespace dfsgate {

class FockOverflowError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Final motional state per mode, in the truncated number basis (cutoff + 1
// amplitudes each).  The accumulated phase is carried by the amplitudes.
struct OracleResult {
  std::vector<Eigen::VectorXcd> mode_states;
  double time = 0.0;
};

// Brute-force integration of the spin-diagonal Hamiltonian
//   H_p(t)/hbar = f_p e^{i delta_p t} a_p^dag + h.c.,  f_p = F_p z_p / hbar,
// for one spin configuration.  The modes factorize exactly, so each is
// stepped independently with midpoint-sampled exponential steps in a
// truncated number basis.  Independent of the closed-form solution; used to
// validate it.
//
// n_steps = 0 selects the step count adaptively: starting from 100 steps per
// drive period, the count doubles until the final state changes by less than
// 1e-9.  An explicit n_steps below 100 per period is rejected.  Population
// reaching the top Fock level (> 1e-8) aborts with FockOverflowError.
OracleResult oracle_evolve(const IonCrystal& crystal, const NormalModes& modes,
                           const DriveConfig& drive, int spin_config, double time,
                           int fock_cutoff, long n_steps = 0);

// Normalized coherent state |alpha| in a truncated number basis.
Eigen::VectorXcd coherent_state(std::complex<double> alpha, int cutoff);

// <a| b> with Eigen's convention (first argument conjugated).
std::complex<double> state_overlap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

// <a> of a truncated-basis state.
std::complex<double> expectation_annihilation(const Eigen::VectorXcd& state);

// Product over modes of <closed-form state | numeric state>, where the
// closed-form state is e^{i Phi_p} |alpha_p> from mode_response.  Modulus 1
// and argument 0 mean exact agreement.
std::complex<double> closed_form_overlap(const IonCrystal& crystal,
                                         const NormalModes& modes,
                                         const DriveConfig& drive, int spin_config,
                                         const OracleResult& numeric);

}  // namespace dfsgate
