#include "dfsgate/dfs_logic.hpp"

#include <cmath>
#include <stdexcept>

namespace dfsgate {

using cplx = std::complex<double>;

DfsProjection project_dfs(const Eigen::VectorXcd& full_state) {
  if (full_state.size() != 16)
    throw std::invalid_argument("expected a 16-dimensional four-ion state");
  DfsProjection projection;
  for (int i = 0; i < 4; ++i)
    projection.state.amplitudes[i] = full_state[dfs_basis[i]];
  projection.leakage =
      full_state.squaredNorm() - projection.state.amplitudes.squaredNorm();
  return projection;
}

Eigen::Matrix4cd ideal_gate() {
  Eigen::Matrix4cd gate = Eigen::Matrix4cd::Zero();
  gate(0, 0) = 1.0;
  gate(1, 1) = cplx(0.0, 1.0);
  gate(2, 2) = cplx(0.0, 1.0);
  gate(3, 3) = 1.0;
  return gate;
}

DfsState bell_product() {
  DfsState state;
  state.amplitudes.setConstant(0.5);
  return state;
}

DfsState make_cluster(const DfsState& input) {
  if ((input.amplitudes - bell_product().amplitudes).norm() > 1e-9)
    throw std::invalid_argument(
        "cluster construction expects the Bell-pair product state inside the DFS");
  DfsState out;
  out.amplitudes = ideal_gate() * input.amplitudes;
  return out;
}

LogicalRegister basis_register(int n_qubits, int basis_index) {
  if (n_qubits < 1 || n_qubits > 24) throw std::invalid_argument("bad register size");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  if (basis_index < 0 || basis_index >= dim)
    throw std::invalid_argument("basis index out of range");
  LogicalRegister reg;
  reg.n_qubits = n_qubits;
  reg.amplitudes = Eigen::VectorXcd::Zero(dim);
  reg.amplitudes[basis_index] = 1.0;
  return reg;
}

LogicalCircuit decompose_gn(int n) {
  if (n < 2) throw std::invalid_argument("the construction needs n >= 2");
  LogicalCircuit circuit;
  if (n == 2) {
    circuit.n_qubits = 2;
    circuit.ops.push_back({LogicalGate::phase, {0, 1}});
    return circuit;
  }
  // Controls 0..n-2 target the auxiliary (last index); the second Toffoli
  // restores it to |0>.
  circuit.n_qubits = n + 1;
  const int aux = n;
  std::vector<int> toffoli;
  for (int q = 0; q < n - 1; ++q) toffoli.push_back(q);
  toffoli.push_back(aux);
  circuit.ops.push_back({LogicalGate::toffoli, toffoli});
  circuit.ops.push_back({LogicalGate::phase, {n - 1, aux}});
  circuit.ops.push_back({LogicalGate::toffoli, toffoli});
  return circuit;
}

namespace {

// Qubit 0 is the most significant bit, matching the spin encoding.
inline int qubit_bit(int index, int qubit, int n_qubits) {
  return (index >> (n_qubits - 1 - qubit)) & 1;
}

void apply_phase(Eigen::VectorXcd& amps, int a, int b, int n_qubits) {
  const cplx i_unit(0.0, 1.0);
  for (Eigen::Index idx = 0; idx < amps.size(); ++idx) {
    const int k = static_cast<int>(idx);
    if (qubit_bit(k, a, n_qubits) ^ qubit_bit(k, b, n_qubits)) amps[idx] *= i_unit;
  }
}

void apply_toffoli(Eigen::VectorXcd& amps, const std::vector<int>& operands,
                   int n_qubits) {
  const int target = operands.back();
  const Eigen::Index target_mask = Eigen::Index{1} << (n_qubits - 1 - target);
  for (Eigen::Index idx = 0; idx < amps.size(); ++idx) {
    if (idx & target_mask) continue;  // visit each pair once
    bool controls_set = true;
    for (size_t c = 0; c + 1 < operands.size(); ++c) {
      if (!qubit_bit(static_cast<int>(idx), operands[c], n_qubits)) {
        controls_set = false;
        break;
      }
    }
    if (controls_set) std::swap(amps[idx], amps[idx | target_mask]);
  }
}

void apply_hadamard(Eigen::VectorXcd& amps, int qubit, int n_qubits) {
  const Eigen::Index mask = Eigen::Index{1} << (n_qubits - 1 - qubit);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Eigen::Index idx = 0; idx < amps.size(); ++idx) {
    if (idx & mask) continue;
    const cplx lo = amps[idx];
    const cplx hi = amps[idx | mask];
    amps[idx] = inv_sqrt2 * (lo + hi);
    amps[idx | mask] = inv_sqrt2 * (lo - hi);
  }
}

}  // namespace

LogicalRegister run_circuit(const LogicalRegister& input, const LogicalCircuit& circuit) {
  if (input.n_qubits != circuit.n_qubits)
    throw std::invalid_argument("register and circuit sizes differ");
  if (input.amplitudes.size() != (Eigen::Index{1} << input.n_qubits))
    throw std::invalid_argument("register dimension does not match its qubit count");
  if (std::abs(input.amplitudes.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("register must be normalized");

  LogicalRegister reg = input;
  for (const LogicalOp& op : circuit.ops) {
    for (int q : op.operands) {
      if (q < 0 || q >= circuit.n_qubits)
        throw std::invalid_argument("gate operand out of range");
    }
    switch (op.gate) {
      case LogicalGate::phase:
        if (op.operands.size() != 2)
          throw std::invalid_argument("the phase gate takes two qubits");
        apply_phase(reg.amplitudes, op.operands[0], op.operands[1], reg.n_qubits);
        break;
      case LogicalGate::toffoli:
        if (op.operands.size() < 2)
          throw std::invalid_argument("toffoli needs at least one control");
        apply_toffoli(reg.amplitudes, op.operands, reg.n_qubits);
        break;
      case LogicalGate::hadamard:
        if (op.operands.size() != 1)
          throw std::invalid_argument("hadamard takes one qubit");
        apply_hadamard(reg.amplitudes, op.operands[0], reg.n_qubits);
        break;
    }
  }
  return reg;
}

}  // namespace dfsgate
