#include <cmath>
#include <complex>

#include "dfsgate/dfs_logic.hpp"
#include "dfsgate/spin.hpp"
#include "doctest.h"

using namespace dfsgate;
using cplx = std::complex<double>;

namespace {

Eigen::VectorXcd full_state_basis(int spin_config) {
  Eigen::VectorXcd state = Eigen::VectorXcd::Zero(16);
  state[spin_config] = 1.0;
  return state;
}

}  // namespace

TEST_SUITE("dfs_logic") {

TEST_CASE("projection picks the four DFS components") {
  SUBCASE("udud is the first basis state") {
    const auto projection = project_dfs(full_state_basis(0b0101));
    CHECK(std::abs(projection.state.amplitudes[0] - 1.0) < 1e-15);
    CHECK(projection.state.amplitudes.tail(3).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(projection.leakage) < 1e-15);
  }

  SUBCASE("uudd lies outside the subspace") {
    const auto projection = project_dfs(full_state_basis(0b0011));
    CHECK(projection.state.amplitudes.cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(projection.leakage - 1.0) < 1e-15);
  }

  SUBCASE("equal superposition leaks three quarters") {
    Eigen::VectorXcd state = Eigen::VectorXcd::Constant(16, 0.25);
    const auto projection = project_dfs(state);
    CHECK(std::abs(projection.leakage - 0.75) < 1e-12);
  }

  SUBCASE("probability is conserved") {
    Eigen::VectorXcd state(16);
    for (int i = 0; i < 16; ++i) state[i] = cplx(std::sin(i + 1.0), std::cos(2.0 * i));
    state.normalize();
    const auto projection = project_dfs(state);
    CHECK(std::abs(projection.leakage + projection.state.amplitudes.squaredNorm() -
                   1.0) < 1e-12);
  }

  SUBCASE("wrong dimension is rejected") {
    CHECK_THROWS_AS(project_dfs(Eigen::VectorXcd::Zero(8)), std::invalid_argument);
  }
}

TEST_CASE("ideal gate truth table") {
  const Eigen::Matrix4cd gate = ideal_gate();
  const cplx i_unit(0.0, 1.0);
  Eigen::Vector4cd udud(1.0, 0.0, 0.0, 0.0);
  Eigen::Vector4cd duud(0.0, 1.0, 0.0, 0.0);
  CHECK((gate * udud - udud).norm() == 0.0);
  CHECK((gate * duud - i_unit * duud).norm() == 0.0);

  // unitary, diagonal, fourth power is the identity
  CHECK((gate * gate.adjoint() - Eigen::Matrix4cd::Identity()).norm() < 1e-15);
  const Eigen::Matrix4cd fourth = gate * gate * gate * gate;
  CHECK((fourth - Eigen::Matrix4cd::Identity()).norm() < 1e-15);

  // squared gate is controlled-Z up to single-qubit phases
  const Eigen::Matrix4cd squared = gate * gate;
  Eigen::Vector4cd cz(1.0, -1.0, -1.0, 1.0);
  CHECK((squared.diagonal() - cz).norm() < 1e-15);
}

TEST_CASE("cluster construction") {
  const auto cluster = make_cluster();
  Eigen::Vector4cd expected(0.5, cplx(0.0, 0.5), cplx(0.0, 0.5), 0.5);
  CHECK((cluster.amplitudes - expected).norm() < 1e-15);
  CHECK(std::abs(cluster.amplitudes.norm() - 1.0) < 1e-15);

  // the output is the ideal gate acting on the Bell product
  const Eigen::Vector4cd direct = ideal_gate() * bell_product().amplitudes;
  CHECK((cluster.amplitudes - direct).norm() == 0.0);

  // embedding the output back into the full space leaks nothing
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(16);
  for (int i = 0; i < 4; ++i) full[dfs_basis[i]] = cluster.amplitudes[i];
  CHECK(std::abs(project_dfs(full).leakage) < 1e-15);

  // zero-drive overlap |<cluster|bell>|^2 = 1/2
  const cplx ov = cluster.amplitudes.dot(bell_product().amplitudes);
  CHECK(std::abs(std::norm(ov) - 0.5) < 1e-12);

  DfsState tilted;
  tilted.amplitudes = Eigen::Vector4cd(0.7, 0.1, 0.1, 0.7);
  CHECK_THROWS_AS(make_cluster(tilted), std::invalid_argument);
}

TEST_CASE("gate decomposition layout") {
  const auto base = decompose_gn(2);
  CHECK(base.n_qubits == 2);
  REQUIRE(base.ops.size() == 1);
  CHECK(base.ops[0].gate == LogicalGate::phase);
  CHECK(base.ops[0].operands == std::vector<int>{0, 1});

  const auto three = decompose_gn(3);
  CHECK(three.n_qubits == 4);
  REQUIRE(three.ops.size() == 3);
  CHECK(three.ops[0].gate == LogicalGate::toffoli);
  CHECK(three.ops[0].operands == std::vector<int>{0, 1, 3});
  CHECK(three.ops[1].gate == LogicalGate::phase);
  CHECK(three.ops[1].operands == std::vector<int>{2, 3});
  CHECK(three.ops[2].operands == std::vector<int>{0, 1, 3});

  const auto four = decompose_gn(4);
  CHECK(four.n_qubits == 5);
  CHECK(four.ops[0].operands == std::vector<int>{0, 1, 2, 4});
  CHECK(four.ops[1].operands == std::vector<int>{3, 4});

  CHECK_THROWS_AS(decompose_gn(1), std::invalid_argument);
}

TEST_CASE("empty circuit is the identity") {
  LogicalCircuit circuit;
  circuit.n_qubits = 3;
  const auto reg = basis_register(3, 5);
  const auto out = run_circuit(reg, circuit);
  CHECK((out.amplitudes - reg.amplitudes).norm() == 0.0);
}

TEST_CASE("the auxiliary returns to zero for every basis input") {
  for (int n = 3; n <= 5; ++n) {
    const auto circuit = decompose_gn(n);
    const int total = circuit.n_qubits;  // n logical + auxiliary (last, LSB)
    for (int basis = 0; basis < (1 << n); ++basis) {
      // logical bits occupy the top n positions; the auxiliary starts at 0
      const auto input = basis_register(total, basis << 1);
      const auto out = run_circuit(input, circuit);
      for (Eigen::Index idx = 0; idx < out.amplitudes.size(); ++idx) {
        if (idx & 1) CHECK(std::abs(out.amplitudes[idx]) == 0.0);
      }
      CHECK(std::abs(out.amplitudes.norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("three-qubit construction applies the expected phases") {
  const auto circuit = decompose_gn(3);
  const cplx i_unit(0.0, 1.0);
  for (int basis = 0; basis < 8; ++basis) {
    const auto out = run_circuit(basis_register(4, basis << 1), circuit);
    const int a = (basis >> 2) & 1;
    const int b = (basis >> 1) & 1;
    const int c = basis & 1;
    const cplx expected = std::pow(i_unit, (a & b) ^ c);
    CHECK(std::abs(out.amplitudes[basis << 1] - expected) < 1e-14);
  }
}

TEST_CASE("phase gate on |++> gives a two-qubit cluster state") {
  LogicalCircuit circuit;
  circuit.n_qubits = 2;
  circuit.ops.push_back({LogicalGate::hadamard, {0}});
  circuit.ops.push_back({LogicalGate::hadamard, {1}});
  circuit.ops.push_back({LogicalGate::phase, {0, 1}});
  const auto out = run_circuit(basis_register(2, 0), circuit);

  // applying S^dag on both qubits maps it onto the standard CZ |++> state
  Eigen::Vector4cd mapped = out.amplitudes;
  const cplx minus_i(0.0, -1.0);
  mapped[1] *= minus_i;
  mapped[2] *= minus_i;
  mapped[3] *= minus_i * minus_i;
  Eigen::Vector4cd cz_cluster(0.5, 0.5, 0.5, -0.5);
  CHECK((mapped - cz_cluster).norm() < 1e-14);
}

TEST_CASE("hadamard squares to the identity") {
  LogicalCircuit circuit;
  circuit.n_qubits = 2;
  circuit.ops.push_back({LogicalGate::hadamard, {1}});
  circuit.ops.push_back({LogicalGate::hadamard, {1}});
  for (int basis = 0; basis < 4; ++basis) {
    const auto reg = basis_register(2, basis);
    const auto out = run_circuit(reg, circuit);
    CHECK((out.amplitudes - reg.amplitudes).norm() < 1e-14);
  }
}

TEST_CASE("operand validation") {
  LogicalCircuit circuit;
  circuit.n_qubits = 2;
  circuit.ops.push_back({LogicalGate::phase, {0, 5}});
  CHECK_THROWS_AS(run_circuit(basis_register(2, 0), circuit), std::invalid_argument);
  LogicalRegister mismatched = basis_register(3, 0);
  circuit.ops.clear();
  CHECK_THROWS_AS(run_circuit(mismatched, circuit), std::invalid_argument);
}

}  // TEST_SUITE
