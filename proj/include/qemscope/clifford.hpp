#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "qemscope/pauli.hpp"
#include "qemscope/rng.hpp"
#include "qemscope/spl_noise.hpp"

namespace qemscope {

// The 24-element single-qubit Clifford group, tabulated once at startup by
// closing over the generators H and S.  Canonical names are the shortest H/S
// words (ties broken lexicographically); common aliases (X, Y, Z, S, SDG, H,
// SX, SXDG, I) are accepted on input.  See docs/gates.md for the full table.
class SqCliffords {
 public:
  struct Gate {
    std::array<uint8_t, 4> img;  // conjugation image letter per input letter
    std::array<int8_t, 4> sgn;   // accompanying sign (+1/-1)
    uint8_t inverse;             // id of the inverse element
    std::string name;            // canonical H/S word ("I" for the identity)
  };

  static const SqCliffords& instance();

  static constexpr int kCount = 24;
  const Gate& gate(int id) const { return gates_[id]; }
  // Canonical name or alias -> id; throws std::invalid_argument.
  int by_name(const std::string& name) const;

 private:
  SqCliffords();
  std::array<Gate, kCount> gates_;
};

// One circuit layer: disjoint adjacent CNOT pairs (control, target) followed
// by a single-qubit Clifford on every qubit.  The layer unitary is
// (tensor of sq gates) * (product of CNOTs): entangling gates act first.
struct CliffordLayer {
  std::vector<std::pair<int, int>> cnots;
  std::vector<uint8_t> sq;  // one SqCliffords id per qubit
};

// In-place conjugation P -> U P U^dag by the layer unitary; `sign` accumulates
// the +-1 Clifford phase.
void conjugate_forward(const CliffordLayer& layer, PauliString& p, int& sign);
// In-place P -> U^dag P U.
void conjugate_adjoint(const CliffordLayer& layer, PauliString& p, int& sign);

// Layered noisy circuit: noise layer l acts immediately before unitary layer l.
struct NoisyCircuit {
  int n = 0;
  NoiseModel noise;                     // one SplLayer per unitary layer
  std::vector<CliffordLayer> unitaries;

  int depth() const { return static_cast<int>(unitaries.size()); }
};

// Heisenberg trajectory of an observable: strings[l] is the Pauli string seen
// by noise layer l, damping K is the product of per-layer fidelities, and sign
// is the accumulated Clifford phase (including the observable's own phase).
struct Trajectory {
  std::vector<PauliString> strings;
  double damping = 1.0;
  int sign = 1;
};

Trajectory propagate(const NoisyCircuit& circuit, const PauliString& observable);

// Alternating even/odd adjacent-pair CNOT brickwork with uniform random
// single-qubit Cliffords; deterministic under the stream.
std::vector<CliffordLayer> random_brickwork(int n, int L, Rng& rng);

// Random stabilizers U G U^dag of the ideal circuit output, for Z-type
// generators G != I.  The +-1 conjugation sign is absorbed into the returned
// string's phase so that the ideal expectation is +1.
std::vector<PauliString> stabilizer_observables(const NoisyCircuit& circuit, int count, Rng& rng);

// Mirrored non-Clifford test circuit: H on all qubits, T on `t_qubits`, the
// noisy Clifford core (first_half then its adjoint; 2*half_depth noise
// layers), then the inverse boundary and a Z^N measurement.  The ideal
// expectation is exactly 1.
struct MirroredCircuitSpec {
  int n = 0;
  int half_depth = 0;
  std::vector<int> t_qubits;
  std::vector<CliffordLayer> first_half;  // size half_depth
  NoiseModel noise;                       // 2 * half_depth layers
};

// Fidelity products c_a over the mirrored core, one per X/Y assignment on the
// T-gate qubits.  The noisy expectation at gain G is 2^{-N_T} sum_a c_a^G.
// Exact mode enumerates all 2^{N_T} assignments (requires N_T <= 20, else
// throws std::length_error); Monte-Carlo mode draws `samples` assignments.
std::vector<double> mirrored_fidelity_products(const MirroredCircuitSpec& spec);
std::vector<double> mirrored_fidelity_products(const MirroredCircuitSpec& spec, int samples,
                                               Rng& rng);

// Sum and sum-of-squares of all relaxation rates in the model.
struct ExponentStatistics {
  double mean = 0.0;      // sum of rates ~ eps*N*L/2
  double variance = 0.0;  // sum of squared rates ~ eps^2*N*L/18
};

ExponentStatistics exponent_statistics(const NoiseModel& noise);

}  // namespace qemscope
