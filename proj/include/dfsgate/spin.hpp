#pragma once

#include <array>
#include <string>

#include "dfsgate/constants.hpp"

namespace dfsgate {

// Spin configurations of an n-ion string are encoded as integers with ion 1
// in the most significant bit position; bit value 0 means up, 1 means down.
// Example (n = 4): udud -> 0b0101 = 5.
inline bool spin_up(int config, int ion, int n_ions) {
  return ((config >> (n_ions - 1 - ion)) & 1) == 0;
}

inline int flip_all_spins(int config, int n_ions) {
  return (~config) & ((1 << n_ions) - 1);
}

inline std::string spin_label(int config, int n_ions) {
  std::string label(static_cast<size_t>(n_ions), 'u');
  for (int i = 0; i < n_ions; ++i) {
    if (!spin_up(config, i, n_ions)) label[static_cast<size_t>(i)] = 'd';
  }
  return label;
}

// Decoherence-free subspace of the four-ion string: the two-up/two-down
// product states with anti-aligned pairs.  Basis order (udud, duud, uddu,
// dudu) is canonical throughout the project.
inline constexpr std::array<int, 4> dfs_basis = {0b0101, 0b1001, 0b0110, 0b1010};

// Phases applied by the ideal controlled-phase gate diag(1, i, i, 1) on the
// DFS basis above.
inline constexpr std::array<double, 4> dfs_ideal_phases = {
    0.0, constants::pi / 2.0, constants::pi / 2.0, 0.0};

}  // namespace dfsgate
