#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace dfsgate {

struct IonSpecies {
  double mass = 0.0;              // kg
  int charge_number = 1;          // Z
  double raman_wavelength = 0.0;  // m, sets the wave-vector difference downstream
};

// 40Ca+ with the qubit in the S1/2 Zeeman sublevels, Raman drive near 397 nm.
IonSpecies calcium40();

// Linear crystal of n ions in a harmonic axial well.  Equilibrium positions
// are dimensionless multiples u_i of the length scale l, where
// l^3 = Z^2 e^2 / (4 pi eps0 M omega_z^2).
struct IonCrystal {
  IonSpecies species;
  int n_ions = 0;
  double trap_frequency = 0.0;  // omega_z, rad/s
  double length_scale = 0.0;    // l, m
  Eigen::VectorXd positions;    // u_i, strictly ascending, sum zero
};

// Axial normal modes.  Eigenvalues mu_p of the dimensionless Hessian are in
// units of omega_z^2, ascending; mu_1 = 1 (center of mass) and mu_2 = 3
// (breathing) are exact.  Column p of `eigenvectors` is b^(p), orthonormal,
// sign-fixed so the largest-magnitude component is positive.
struct NormalModes {
  Eigen::VectorXd eigenvalues;           // mu_p
  Eigen::MatrixXd eigenvectors;          // b^(p) as columns
  Eigen::VectorXd frequencies;           // omega_p = sqrt(mu_p) omega_z, rad/s
  Eigen::VectorXd ground_state_spreads;  // z_p = sqrt(hbar / 2 M omega_p), m
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Gradient of the dimensionless potential 1/2 sum u_i^2 + sum_{i<j} 1/|u_i-u_j|;
// zero at equilibrium.
Eigen::VectorXd force_balance(const Eigen::VectorXd& positions);

// Second-derivative matrix of the same potential:
//   A_mm = 1 + 2 sum_{p != m} |u_m - u_p|^-3,   A_mn = -2 |u_m - u_n|^-3.
Eigen::MatrixXd dimensionless_hessian(const Eigen::VectorXd& positions);

// Damped Newton iteration on force_balance, initialized from uniform spacing.
// Throws ConvergenceError (carrying the residual) if the iteration cap is hit.
Eigen::VectorXd equilibrium_positions(int n_ions, double tolerance = 1e-12);

double length_scale(const IonSpecies& species, double trap_frequency);

IonCrystal make_crystal(const IonSpecies& species, int n_ions,
                        double trap_frequency, double tolerance = 1e-12);

NormalModes normal_modes(const IonCrystal& crystal);

}  // namespace dfsgate
