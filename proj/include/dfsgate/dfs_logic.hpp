#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dfsgate/spin.hpp"

namespace dfsgate {

// State restricted to the four-ion DFS, amplitudes over (udud, duud, uddu,
// dudu).  Norm below one signals leakage out of the subspace.
struct DfsState {
  Eigen::Vector4cd amplitudes;
};

struct DfsProjection {
  DfsState state;
  double leakage = 0.0;  // input norm minus DFS norm
};

// Projects a full 16-dimensional spin state (ion 1 = most significant bit,
// 0 = up) onto the DFS.
DfsProjection project_dfs(const Eigen::VectorXcd& full_state);

// diag(1, i, i, 1): the controlled-phase gate between the two logical qubits.
Eigen::Matrix4cd ideal_gate();

// |B12>|B34>, the product of odd Bell pairs; (1, 1, 1, 1)/2 in the DFS basis.
DfsState bell_product();

// Applies the ideal gate to the Bell-pair product, producing the linear
// four-qubit cluster state (1, i, i, 1)/2.  Rejects any other input.
DfsState make_cluster(const DfsState& input = bell_product());

// ---------------------------------------------------------------------------
// Logical-circuit layer.  One logical qubit is a pair of ions, |0> = ud,
// |1> = du; gates below act on logical indices.  Register bit convention
// matches the spin encoding: qubit 0 is the most significant bit.
// ---------------------------------------------------------------------------

enum class LogicalGate { phase, toffoli, hadamard };

struct LogicalOp {
  LogicalGate gate;
  std::vector<int> operands;  // toffoli: controls..., target last
};

struct LogicalCircuit {
  int n_qubits = 0;
  std::vector<LogicalOp> ops;
};

struct LogicalRegister {
  int n_qubits = 0;
  Eigen::VectorXcd amplitudes;
};

LogicalRegister basis_register(int n_qubits, int basis_index);

// n-qubit controlled-phase construction: the bare gate for n = 2; for n >= 3,
// a Toffoli from the first n-1 controls onto a fresh auxiliary (last index),
// the two-qubit gate between qubit n-1 and the auxiliary, and the Toffoli
// again to restore the auxiliary to |0>.
LogicalCircuit decompose_gn(int n);

LogicalRegister run_circuit(const LogicalRegister& input, const LogicalCircuit& circuit);

}  // namespace dfsgate
