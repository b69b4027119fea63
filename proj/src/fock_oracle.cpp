#include "dfsgate/fock_oracle.hpp"

#include <cmath>
#include <complex>

#include "dfsgate/constants.hpp"
#include "dfsgate/dynamics.hpp"

namespace dfsgate {

using cplx = std::complex<double>;

namespace {

constexpr double top_level_limit = 1e-8;

struct ModeWorkspace {
  Eigen::VectorXd sqrt_n;
  Eigen::VectorXcd term;
  Eigen::VectorXcd h_term;

  explicit ModeWorkspace(Eigen::Index dim)
      : sqrt_n(dim), term(dim), h_term(dim) {
    for (Eigen::Index m = 0; m < dim; ++m)
      sqrt_n[m] = std::sqrt(static_cast<double>(m));
  }
};

// One step exp(-i dt (f a^dag + conj(f) a)) psi by a truncated Taylor series.
// The generator is tridiagonal, so each term is a cheap sparse apply.
void exponential_step(Eigen::VectorXcd& psi, cplx f, double dt, ModeWorkspace& ws) {
  const Eigen::Index dim = psi.size();
  ws.term = psi;
  const cplx fc = std::conj(f);
  for (int j = 1; j <= 80; ++j) {
    ws.h_term[0] = fc * ws.sqrt_n[1] * ws.term[1];
    for (Eigen::Index m = 1; m + 1 < dim; ++m)
      ws.h_term[m] =
          f * ws.sqrt_n[m] * ws.term[m - 1] + fc * ws.sqrt_n[m + 1] * ws.term[m + 1];
    ws.h_term[dim - 1] = f * ws.sqrt_n[dim - 1] * ws.term[dim - 2];
    ws.term = (cplx(0.0, -dt) / static_cast<double>(j)) * ws.h_term;
    psi += ws.term;
    if (ws.term.squaredNorm() < 1e-36) break;
  }
}

Eigen::VectorXcd integrate_mode(cplx f, double delta_p, double time, int cutoff,
                                long n_steps, ModeWorkspace& ws) {
  const Eigen::Index dim = cutoff + 1;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi[0] = 1.0;
  if (time == 0.0 || f == 0.0) return psi;

  const double dt = time / static_cast<double>(n_steps);
  // The drive phase advances by a fixed rotation per step; recompute it from
  // scratch periodically so rounding does not accumulate over long runs.
  const cplx rotation = std::polar(1.0, delta_p * dt);
  cplx phase = std::polar(1.0, delta_p * 0.5 * dt);
  for (long k = 0; k < n_steps; ++k) {
    if ((k & 1023) == 0)
      phase = std::polar(1.0, delta_p * (static_cast<double>(k) + 0.5) * dt);
    exponential_step(psi, f * phase, dt, ws);
    phase *= rotation;
    if (std::norm(psi[dim - 1]) > top_level_limit)
      throw FockOverflowError("population reached the Fock cutoff");
  }
  return psi;
}

long minimum_steps(double delta_p, double time) {
  // At least 100 steps per drive period, never fewer than 256 overall.
  const double periods = std::abs(delta_p) * time / constants::two_pi;
  const double required = 100.0 * periods;
  long n = 256;
  if (required > static_cast<double>(n)) n = static_cast<long>(std::ceil(required));
  return n;
}

}  // namespace

OracleResult oracle_evolve(const IonCrystal& crystal, const NormalModes& modes,
                           const DriveConfig& drive, int spin_config, double time,
                           int fock_cutoff, long n_steps) {
  validate_drive(crystal, drive);
  if (fock_cutoff < 2) throw std::invalid_argument("fock cutoff must be >= 2");
  if (time < 0.0) throw std::invalid_argument("time must be nonnegative");

  OracleResult result;
  result.time = time;
  result.mode_states.reserve(crystal.n_ions);
  ModeWorkspace ws(fock_cutoff + 1);

  // Validate every mode before integrating any of them.
  std::vector<cplx> drive_amplitudes(crystal.n_ions);
  std::vector<double> detunings(crystal.n_ions);
  for (int p = 0; p < crystal.n_ions; ++p) {
    const cplx force = spin_force(crystal, modes, drive, spin_config, p);
    drive_amplitudes[p] = force * modes.ground_state_spreads[p] / constants::hbar;
    detunings[p] = mode_detuning(modes, drive, p);
    // Envelope of the closed loop; a resonant mode grows linearly instead.
    const double alpha_max = detunings[p] != 0.0
                                 ? 2.0 * std::abs(drive_amplitudes[p] / detunings[p])
                                 : std::abs(drive_amplitudes[p]) * time;
    if (alpha_max > std::sqrt(static_cast<double>(fock_cutoff)) / 3.0)
      throw std::invalid_argument("fock cutoff too small for the expected displacement");
  }

  for (int p = 0; p < crystal.n_ions; ++p) {
    const cplx f = drive_amplitudes[p];
    const double delta_p = detunings[p];
    const long n_min = minimum_steps(delta_p, time);
    if (n_steps > 0) {
      if (n_steps < n_min)
        throw std::invalid_argument("need at least 100 steps per drive period");
      result.mode_states.push_back(
          integrate_mode(f, delta_p, time, fock_cutoff, n_steps, ws));
      continue;
    }

    // Step doubling with Richardson extrapolation of the second-order
    // midpoint states: successive levels combine as (4 psi_2n - psi_n) / 3,
    // and the count doubles until two consecutive extrapolants agree to
    // better than 1e-9.
    long n = n_min;
    Eigen::VectorXcd coarse = integrate_mode(f, delta_p, time, fock_cutoff, n, ws);
    Eigen::VectorXcd fine =
        integrate_mode(f, delta_p, time, fock_cutoff, 2 * n, ws);
    Eigen::VectorXcd extrapolant = (4.0 * fine - coarse) / 3.0;
    bool converged = false;
    for (int doubling = 0; doubling < 12; ++doubling) {
      n *= 2;
      coarse.swap(fine);
      fine = integrate_mode(f, delta_p, time, fock_cutoff, 2 * n, ws);
      Eigen::VectorXcd refined = (4.0 * fine - coarse) / 3.0;
      const double change = (refined - extrapolant).norm();
      extrapolant.swap(refined);
      if (change < 1e-9) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw std::runtime_error("fock integrator failed to reach a stationary state");
    result.mode_states.push_back(std::move(extrapolant));
  }
  return result;
}

Eigen::VectorXcd coherent_state(cplx alpha, int cutoff) {
  Eigen::VectorXcd state(cutoff + 1);
  state[0] = std::exp(-0.5 * std::norm(alpha));
  for (int m = 1; m <= cutoff; ++m)
    state[m] = state[m - 1] * alpha / std::sqrt(static_cast<double>(m));
  state.normalize();  // absorb the truncated tail
  return state;
}

cplx state_overlap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return a.dot(b);
}

cplx expectation_annihilation(const Eigen::VectorXcd& state) {
  cplx sum = 0.0;
  for (Eigen::Index m = 0; m + 1 < state.size(); ++m)
    sum += std::conj(state[m]) * std::sqrt(static_cast<double>(m + 1)) * state[m + 1];
  return sum;
}

cplx closed_form_overlap(const IonCrystal& crystal, const NormalModes& modes,
                         const DriveConfig& drive, int spin_config,
                         const OracleResult& numeric) {
  cplx total = 1.0;
  for (int p = 0; p < crystal.n_ions; ++p) {
    const cplx force = spin_force(crystal, modes, drive, spin_config, p);
    const ModeResponse mr =
        mode_response(force, modes.ground_state_spreads[p],
                      mode_detuning(modes, drive, p), numeric.time);
    const int cutoff = static_cast<int>(numeric.mode_states[p].size()) - 1;
    Eigen::VectorXcd closed = coherent_state(mr.displacement, cutoff);
    closed *= std::polar(1.0, mr.phase);
    total *= state_overlap(closed, numeric.mode_states[p]);
  }
  return total;
}

}  // namespace dfsgate
