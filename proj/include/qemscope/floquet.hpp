#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "qemscope/budget.hpp"
#include "qemscope/pauli.hpp"
#include "qemscope/spl_noise.hpp"

namespace qemscope {

// Kicked isotropic Heisenberg benchmark on a periodic chain of N = 4k+2
// qubits: a 2-local correlated initial layer followed by t brickwork Floquet
// steps of U = (sqrtX x T) exp[-iJ(XX+YY+ZZ)] (sqrtX x T).  CNOT depth is
// L = 3t + 1.
struct FloquetConfig {
  int n = 6;           // qubits, n == 2 (mod 4)
  int t = 0;           // Floquet steps
  double j = 0.0;      // interaction strength, (0, pi/2]
  double theta = 0.0;  // symmetry-breaking angle of the skewed pair
  double phi = 0.0;    // local phase

  int depth() const { return 3 * t + 1; }
  void validate() const;  // throws std::invalid_argument
};

// One gate of the layered circuit; q2 < 0 marks a one-qubit gate.  The pair
// (n-1, 0) appears in odd steps through the periodic boundary.
struct FloquetOp {
  int q1 = 0;
  int q2 = -1;
  Eigen::Matrix2cd u1;
  Eigen::Matrix4cd u2;
  std::string name;
};

struct FloquetCircuit {
  int n = 0;
  std::vector<std::vector<FloquetOp>> layers;  // layer 0 prepares the state
};

FloquetCircuit build_circuit(const FloquetConfig& config);

// Named two-qubit gate sequence (application order) whose ordered product
// equals exp[-iJ(XX+YY+ZZ)] up to a global phase; uses 3 CNOTs.
std::vector<std::pair<std::string, Eigen::Matrix4cd>> partial_swap_decomposition(double j);

// exp[-iJ(XX+YY+ZZ)] built from the triplet/singlet closed form.
Eigen::Matrix4cd heisenberg_interaction(double j);

// CNOT-layer accounting: depth 3t + 1 and total CNOT count.
int cnot_depth(const FloquetConfig& config);
int64_t cnot_count(const FloquetConfig& config);

// Dual-unitary point J = pi/4: the state is a rainbow of dressed Bell-like
// pairs, so product-Pauli expectations factorize; cost linear in N.  Requires
// t <= floor(N/4) (throws std::out_of_range beyond the rainbow regime) and
// J = pi/4 (throws std::invalid_argument).
double dual_unitary_exact(const FloquetConfig& config, const PauliString& observable);

// Same state after compressing to half the exact bond dimension: the skewed
// pair collapses to the dominant dressed product state.  A Schmidt tie
// |cos(theta/2)| == |sin(theta/2)| throws std::invalid_argument.
double dual_unitary_truncated(const FloquetConfig& config, const PauliString& observable);

// Connected correlator <Z_a Z_b> - <Z_a><Z_b> of the skewed-pair qubits
// a = N/2-1-t, b = N/2+t; truncated=false uses the exact state.
double skewed_pair_correlator(const FloquetConfig& config, bool truncated);

// Dense statevector reference; capacity guard n <= 12 (std::length_error).
double statevector_simulate(const FloquetConfig& config, const PauliString& observable);

// Brickwork MPS evolution with a bond cap applied after every Floquet step
// (gates and the boundary-routing swaps are applied exactly in between).
// Capacity guards: n <= 24 and chi <= 4096 (std::length_error).
struct MpsRunResult {
  double value = 0.0;
  std::vector<int> max_bond_per_step;  // after the initial layer and each step
  double truncation_weight = 0.0;      // accumulated relative 2-norm discards
};

MpsRunResult mps_simulate(const FloquetConfig& config, int chi, const PauliString& observable);

// Fig.-style accuracy comparison per evolution step: classical MPS baselines
// at modest (params.flops) and world-class (1.2e18 FLOPS) power, unmitigated
// quantum error 1 - e^{-eps N L / 2}, and the TEM-mitigated budget.
struct AdvantageRow {
  int t = 0;
  int depth = 0;
  double classical_modest = 0.0;
  double classical_frontier = 0.0;
  double unmitigated = 0.0;
  double mitigated = 0.0;
};

std::vector<AdvantageRow> advantage_comparison(const FloquetConfig& config,
                                               const NoiseModel& noise,
                                               const ResourceParams& params);

}  // namespace qemscope
