#include "dfsgate/ion_crystal.hpp"

#include <cmath>

#include "dfsgate/constants.hpp"

namespace dfsgate {

namespace {

void check_species(const IonSpecies& species) {
  if (species.mass <= 0.0) throw std::invalid_argument("ion mass must be positive");
  if (species.charge_number < 1) throw std::invalid_argument("charge number must be >= 1");
  if (species.raman_wavelength <= 0.0)
    throw std::invalid_argument("raman wavelength must be positive");
}

}  // namespace

IonSpecies calcium40() {
  IonSpecies ca;
  ca.mass = 39.9625909 * constants::atomic_mass_unit;
  ca.charge_number = 1;
  ca.raman_wavelength = 397e-9;
  return ca;
}

Eigen::VectorXd force_balance(const Eigen::VectorXd& u) {
  const int n = static_cast<int>(u.size());
  Eigen::VectorXd g = u;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = u[j] - u[i];
      const double inv2 = 1.0 / (d * d);
      g[i] += inv2;
      g[j] -= inv2;
    }
  }
  return g;
}

Eigen::MatrixXd dimensionless_hessian(const Eigen::VectorXd& u) {
  const int n = static_cast<int>(u.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = std::abs(u[j] - u[i]);
      const double inv3 = 2.0 / (d * d * d);
      a(i, i) += inv3;
      a(j, j) += inv3;
      a(i, j) -= inv3;
      a(j, i) -= inv3;
    }
  }
  return a;
}

Eigen::VectorXd equilibrium_positions(int n_ions, double tolerance) {
  if (n_ions < 1) throw std::invalid_argument("n_ions must be >= 1");
  if (tolerance <= 0.0) throw std::invalid_argument("tolerance must be positive");
  if (n_ions == 1) return Eigen::VectorXd::Zero(1);

  // Uniform spacing over [-L, L]; the n^0.56 law keeps the guess close to the
  // true extent up to a few tens of ions.
  const double extent = 0.98 * std::pow(static_cast<double>(n_ions), 0.56);
  Eigen::VectorXd u =
      Eigen::VectorXd::LinSpaced(n_ions, -extent, extent);

  constexpr int max_iterations = 200;
  Eigen::VectorXd g = force_balance(u);
  double residual = g.cwiseAbs().maxCoeff();
  for (int iter = 0; iter < max_iterations; ++iter) {
    if (residual < tolerance) return u;
    const Eigen::MatrixXd jac = dimensionless_hessian(u);
    const Eigen::VectorXd step = jac.ldlt().solve(-g);
    // Backtracking keeps the iterate in the ordered region.
    double s = 1.0;
    while (s > 1e-6) {
      const Eigen::VectorXd candidate = u + s * step;
      bool ordered = true;
      for (int i = 0; i + 1 < n_ions; ++i) {
        if (candidate[i] >= candidate[i + 1]) {
          ordered = false;
          break;
        }
      }
      if (ordered) {
        const Eigen::VectorXd g_new = force_balance(candidate);
        const double r_new = g_new.cwiseAbs().maxCoeff();
        if (r_new < residual || s <= 1e-6) {
          u = candidate;
          g = g_new;
          residual = r_new;
          break;
        }
      }
      s *= 0.5;
    }
  }
  if (residual < tolerance) return u;
  throw ConvergenceError("equilibrium positions did not converge, residual " +
                             std::to_string(residual),
                         residual);
}

double length_scale(const IonSpecies& species, double trap_frequency) {
  check_species(species);
  if (trap_frequency <= 0.0) throw std::invalid_argument("trap frequency must be positive");
  const double z = static_cast<double>(species.charge_number);
  const double q = z * constants::elementary_charge;
  const double l3 = q * q /
                    (4.0 * constants::pi * constants::epsilon0 * species.mass *
                     trap_frequency * trap_frequency);
  return std::cbrt(l3);
}

IonCrystal make_crystal(const IonSpecies& species, int n_ions, double trap_frequency,
                        double tolerance) {
  IonCrystal crystal;
  crystal.species = species;
  crystal.n_ions = n_ions;
  crystal.trap_frequency = trap_frequency;
  crystal.length_scale = length_scale(species, trap_frequency);
  crystal.positions = equilibrium_positions(n_ions, tolerance);
  return crystal;
}

NormalModes normal_modes(const IonCrystal& crystal) {
  if (crystal.n_ions < 1 || crystal.positions.size() != crystal.n_ions)
    throw std::invalid_argument("crystal has no valid equilibrium positions");
  if (crystal.trap_frequency <= 0.0)
    throw std::invalid_argument("trap frequency must be positive");

  const Eigen::MatrixXd a = dimensionless_hessian(crystal.positions);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("normal-mode eigendecomposition failed");

  NormalModes modes;
  modes.eigenvalues = solver.eigenvalues();
  modes.eigenvectors = solver.eigenvectors();

  const int n = crystal.n_ions;
  for (int p = 0; p < n; ++p) {
    if (modes.eigenvalues[p] <= 0.0)
      throw std::runtime_error("non-positive mode eigenvalue: unstable crystal");
    // Fix the overall sign: the largest-magnitude component is positive.
    // Ties (e.g. the equal-amplitude E-mode pattern) resolve to the first
    // component within a relative window, so the convention is reproducible.
    auto col = modes.eigenvectors.col(p);
    const double vmax = col.cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i) {
      if (std::abs(col[i]) >= vmax * (1.0 - 1e-9)) {
        if (col[i] < 0.0) modes.eigenvectors.col(p) *= -1.0;
        break;
      }
    }
  }

  modes.frequencies =
      modes.eigenvalues.cwiseSqrt() * crystal.trap_frequency;
  modes.ground_state_spreads =
      (constants::hbar / (2.0 * crystal.species.mass * modes.frequencies.array()))
          .sqrt()
          .matrix();
  return modes;
}

}  // namespace dfsgate
