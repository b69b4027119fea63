#include <cmath>
#include <complex>

#include "dfsgate/constants.hpp"
#include "dfsgate/drive.hpp"
#include "dfsgate/ion_crystal.hpp"
#include "dfsgate/spin.hpp"
#include "doctest.h"

using namespace dfsgate;
namespace C = dfsgate::constants;
using cplx = std::complex<double>;

namespace {

DriveConfig working_drive(const IonSpecies& species) {
  DriveConfig drive;
  drive.delta_k = 2.0 * std::sqrt(2.0) * C::pi / species.raman_wavelength;
  drive.detuning = C::two_pi * 40e3;
  drive.mediating_mode = 2;
  drive.rabi_up = C::two_pi * 100e3;
  drive.rabi_down = -drive.rabi_up;
  return drive;
}

struct TunedSetup {
  IonCrystal crystal;
  NormalModes modes;
  DriveConfig drive;
};

TunedSetup tuned_setup() {
  const auto ca = calcium40();
  const auto tuning = tune_trap(ca, 15);
  TunedSetup s;
  s.crystal = make_crystal(ca, 4, tuning.trap_frequency);
  s.modes = normal_modes(s.crystal);
  s.drive = working_drive(ca);
  return s;
}

}  // namespace

TEST_SUITE("drive") {

TEST_CASE("site phase of a centered ion is minus the field phase difference") {
  auto crystal = make_crystal(calcium40(), 1, C::two_pi * 2.82e6);
  DriveConfig drive = working_drive(calcium40());
  drive.phase_difference = 0.7;
  const auto zeta = site_phases(crystal, drive);
  CHECK(std::abs(zeta[0] + 0.7) < 1e-15);
}

TEST_CASE("distance condition aligns the site phases pairwise") {
  const auto s = tuned_setup();
  const auto zeta = site_phases(s.crystal, s.drive);
  CHECK(std::abs(std::polar(1.0, zeta[2]) - std::polar(1.0, zeta[0])) < 1e-10);
  CHECK(std::abs(std::polar(1.0, zeta[3]) - std::polar(1.0, zeta[1])) < 1e-10);
  // dk * l at the n = 15 working point
  CHECK(std::abs(s.drive.delta_k * s.crystal.length_scale - 49.83) < 0.02);
}

TEST_CASE("differential shift scales with the illumination factor") {
  auto drive = working_drive(calcium40());
  CHECK(differential_shift(drive, Spin::up, 0) == drive.rabi_up);
  CHECK(differential_shift(drive, Spin::down, 3) == drive.rabi_down);
  drive.illumination_factors = Eigen::Vector4d(1.0, 1.01, 1.0, 1.0);
  CHECK(std::abs(differential_shift(drive, Spin::up, 1) - 1.01 * drive.rabi_up) <
        1e-12 * std::abs(drive.rabi_up));
  drive.stark_up = C::two_pi * 1e3;
  CHECK(std::abs(stark_shift(drive, Spin::up, 1) - 1.01 * drive.stark_up) < 1e-9);
}

TEST_CASE("generalized force reduces to the four-term expression on the E-mode") {
  const auto s = tuned_setup();
  const auto zeta = site_phases(s.crystal, s.drive);
  const double floor = 1e-12 * C::hbar * s.drive.delta_k * std::abs(s.drive.rabi_up);
  for (int config : {0b1001, 0b0101, 0b0011, 0b1110}) {
    const cplx f = spin_force(s.crystal, s.modes, s.drive, config, 2);
    // direct summation with the (+,-,-,+) pattern and the hbar dk / 2 prefactor
    auto omega_of = [&](int i) {
      return spin_up(config, i, 4) ? s.drive.rabi_up : s.drive.rabi_down;
    };
    const cplx direct =
        0.5 * C::hbar * s.drive.delta_k *
        (omega_of(0) * std::polar(1.0, zeta[0]) - omega_of(1) * std::polar(1.0, zeta[1]) -
         omega_of(2) * std::polar(1.0, zeta[2]) + omega_of(3) * std::polar(1.0, zeta[3]));
    CHECK(std::abs(f - direct) < floor);
  }
}

TEST_CASE("tuned working point separates driven and undriven DFS states") {
  const auto s = tuned_setup();
  const double scale = C::hbar * s.drive.delta_k * std::abs(s.drive.rabi_up);

  // udud / dudu decouple from the E-mode for any Rabi pair
  DriveConfig skewed = s.drive;
  skewed.rabi_up = C::two_pi * 80e3;
  skewed.rabi_down = C::two_pi * 130e3;
  CHECK(std::abs(spin_force(s.crystal, s.modes, skewed, dfs_basis[0], 2)) <
        1e-10 * scale);
  CHECK(std::abs(spin_force(s.crystal, s.modes, skewed, dfs_basis[3], 2)) <
        1e-10 * scale);

  // driven pair magnitude |e^{i zeta_1} + e^{i zeta_2}| at n = 15
  const cplx f_duud = spin_force(s.crystal, s.modes, s.drive, dfs_basis[1], 2);
  const cplx f_uddu = spin_force(s.crystal, s.modes, s.drive, dfs_basis[2], 2);
  CHECK(std::abs(std::abs(f_duud) - std::abs(f_uddu)) < 1e-12 * std::abs(f_duud));
  const double phase_sum = std::abs(f_duud) / scale;
  CHECK(std::abs(phase_sum - 1.59) < 5e-3);

  // center-of-mass forces on the driven pair vanish at the same point
  CHECK(std::abs(spin_force(s.crystal, s.modes, s.drive, dfs_basis[1], 0)) <
        1e-10 * scale);
  CHECK(std::abs(spin_force(s.crystal, s.modes, s.drive, dfs_basis[2], 0)) <
        1e-10 * scale);
}

TEST_CASE("force is linear in the Rabi pair and odd under a global spin flip") {
  const auto s = tuned_setup();
  const double floor = 1e-12 * C::hbar * s.drive.delta_k * std::abs(s.drive.rabi_up);
  for (int p = 0; p < 4; ++p) {
    for (int config : {0b0000, 0b0101, 0b1001, 0b0111}) {
      const cplx f = spin_force(s.crystal, s.modes, s.drive, config, p);
      DriveConfig scaled = s.drive;
      scaled.rabi_up *= 2.5;
      scaled.rabi_down *= 2.5;
      const cplx f_scaled = spin_force(s.crystal, s.modes, scaled, config, p);
      CHECK(std::abs(f_scaled - 2.5 * f) <= 2.5 * floor);

      DriveConfig negated = s.drive;
      negated.rabi_up = -s.drive.rabi_up;
      negated.rabi_down = -s.drive.rabi_down;
      const cplx f_neg = spin_force(s.crystal, s.modes, negated, config, p);
      CHECK(std::abs(f_neg + f) <= floor);
    }
  }
}

TEST_CASE("shifting the field phase difference rotates every force by a common factor") {
  const auto s = tuned_setup();
  DriveConfig shifted = s.drive;
  shifted.phase_difference = s.drive.phase_difference + 1.234;
  const cplx rotation = std::polar(1.0, -1.234);
  const double floor = 1e-12 * C::hbar * s.drive.delta_k * std::abs(s.drive.rabi_up);
  for (int p = 0; p < 4; ++p) {
    for (int config = 0; config < 16; ++config) {
      const cplx f = spin_force(s.crystal, s.modes, s.drive, config, p);
      const cplx g = spin_force(s.crystal, s.modes, shifted, config, p);
      CHECK(std::abs(g - rotation * f) <= floor);
    }
  }
}

TEST_CASE("driven E-mode force vanishes exactly at the distance-condition lattice") {
  // sweep the length scale; udud forces vanish where dk l (u4 - u2) = 2 pi m
  const auto ca = calcium40();
  auto crystal = make_crystal(ca, 4, C::two_pi * 2.82e6);
  const auto modes = normal_modes(crystal);
  auto drive = working_drive(ca);
  const double spacing = crystal.positions[3] - crystal.positions[1];

  auto udud_component = [&](double l) {
    IonCrystal c = crystal;
    c.length_scale = l;
    const cplx f = spin_force(c, modes, drive, dfs_basis[0], 2);
    return f.imag();  // symmetric mode: the force lies on the imaginary axis
  };

  for (int m : {14, 15, 16}) {
    const double l_expected = C::two_pi * m / (drive.delta_k * spacing);
    const double bracket = 0.3 * C::two_pi / (drive.delta_k * spacing);
    double lo = l_expected - bracket;
    double hi = l_expected + bracket;
    double g_lo = udud_component(lo);
    REQUIRE(g_lo * udud_component(hi) < 0.0);
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const double g_mid = udud_component(mid);
      if (g_lo * g_mid <= 0.0)
        hi = mid;
      else {
        lo = mid;
        g_lo = g_mid;
      }
    }
    CHECK(std::abs(0.5 * (lo + hi) - l_expected) < 1e-6 * l_expected);
  }
}

TEST_CASE("a 40 kHz detuning closes the loop in 25 microseconds") {
  DriveConfig drive = working_drive(calcium40());
  CHECK(std::abs(gate_time(drive) - 25e-6) < 1e-18);
}

TEST_CASE("trap tuning reproduces the tabulated E-mode working point") {
  const auto ca = calcium40();
  const auto tuning = tune_trap(ca, 15);
  CHECK(std::abs(tuning.trap_frequency / (C::two_pi * 2.82e6) - 1.0) < 0.01);
  CHECK(std::abs(tuning.length_scale / 2.2266e-6 - 1.0) < 1e-4);

  // power laws in the distance parameter
  const auto doubled = tune_trap(ca, 30);
  CHECK(std::abs(doubled.length_scale / (2.0 * tuning.length_scale) - 1.0) < 1e-12);
  CHECK(std::abs(doubled.trap_frequency /
                     (tuning.trap_frequency * std::pow(2.0, -1.5)) -
                 1.0) < 1e-12);
}

TEST_CASE("Rabi calibration hits the tabulated value and scales analytically") {
  const auto s = tuned_setup();
  const double omega = calibrate_rabi(s.crystal, s.modes, s.drive, C::pi / 2);
  CHECK(std::abs(omega / (C::two_pi * 130.62e3) - 1.0) < 0.01);

  // quadrupled target phase doubles the Rabi frequency
  const double omega4 = calibrate_rabi(s.crystal, s.modes, s.drive, 2.0 * C::pi);
  CHECK(std::abs(omega4 / (2.0 * omega) - 1.0) < 1e-12);

  // doubled detuning doubles the Rabi frequency at fixed target
  DriveConfig fast = s.drive;
  fast.detuning *= 2.0;
  const double omega_fast = calibrate_rabi(s.crystal, s.modes, fast, C::pi / 2);
  CHECK(std::abs(omega_fast / (2.0 * omega) - 1.0) < 1e-12);
}

TEST_CASE("calibration fails where the driven force cancels") {
  const auto s = tuned_setup();
  IonCrystal degenerate = s.crystal;
  const double spacing = degenerate.positions[3] - degenerate.positions[1];
  degenerate.length_scale = 31.0 * C::pi / (s.drive.delta_k * spacing);
  CHECK_THROWS_AS(calibrate_rabi(degenerate, s.modes, s.drive, C::pi / 2),
                  CalibrationError);
}

TEST_CASE("drive validation") {
  const auto s = tuned_setup();
  DriveConfig bad = s.drive;
  bad.detuning = 0.0;
  CHECK_THROWS_AS(validate_drive(s.crystal, bad), std::invalid_argument);
  bad = s.drive;
  bad.illumination_factors = Eigen::Vector3d::Ones();
  CHECK_THROWS_AS(validate_drive(s.crystal, bad), std::invalid_argument);
  bad = s.drive;
  bad.illumination_factors = Eigen::Vector4d(1.0, -0.2, 1.0, 1.0);
  CHECK_THROWS_AS(validate_drive(s.crystal, bad), std::invalid_argument);
}

}  // TEST_SUITE
