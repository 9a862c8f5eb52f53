#pragma once

#include <vector>

#include "qemscope/pauli.hpp"
#include "qemscope/rng.hpp"

namespace qemscope {

// One relaxation generator of a sparse Pauli-Lindblad layer: a one-qubit
// jump operator (q2 < 0) or an adjacent two-qubit one.  `rate` is the
// dimensionless lambda per layer duration; complete positivity of the
// forward channel requires rate >= 0.
struct SplGenerator {
  int q1 = 0;
  int q2 = -1;            // -1 for one-qubit generators
  int axis1 = kX;         // kX/kY/kZ
  int axis2 = kI;         // kI for one-qubit generators
  double rate = 0.0;

  bool two_qubit() const { return q2 >= 0; }
  // True iff the generator's Pauli anticommutes with `beta` on its support.
  bool anticommutes(const PauliString& beta) const;
};

struct SplLayer {
  int n = 0;
  std::vector<SplGenerator> generators;
};

struct NoiseModel {
  int n = 0;
  std::vector<SplLayer> layers;
  double theta = 0.0;  // std. deviation of relative rate fluctuations

  int depth() const { return static_cast<int>(layers.size()); }
  // gamma = prod_l gamma_l = exp(2 * sum of all rates).
  double gamma_total() const;
  // Density of errors: gamma^{1/(n*L)} - 1.
  double epsilon() const;
};

// Pauli fidelity: prod over generators anticommuting with beta of exp(-2 lambda).
// Identity string -> exactly 1.  Throws std::invalid_argument on size mismatch.
double fidelity(const SplLayer& layer, const PauliString& beta);

// exp(2 * sum of rates) >= 1.
double gamma(const SplLayer& layer);

// Samples an n-qubit, L-layer model on a linear chain: per layer, 3 one-qubit
// rates per qubit ~ Normal(eps/12, eps/12) and 9 two-qubit rates per adjacent
// pair ~ Normal(eps/36, eps/36), negatives clipped to zero.
NoiseModel sample_model(int n, int L, double epsilon, Rng& rng, double theta = 0.0);

// Per layer draws theta_l ~ Normal(0, theta) and rescales all rates uniformly
// so that gamma_l -> gamma_l * (1 + theta_l * eps)^n.  A scale that would turn
// rates negative clamps at zero; such events are counted in *clamped if given.
NoiseModel perturb_model(const NoiseModel& model, Rng& rng, int* clamped = nullptr);

// Quasiprobability of the single-generator inverse channel:
// q0 = (1+e^{2l})/2, q1 = (1-e^{2l})/2 <= 0, |q0|+|q1| = e^{2l} = gamma_g.
void inverse_quasiprobability(const SplGenerator& g, double& q0, double& q1, double& gamma_g);

// Probability of applying the generator's Pauli when sampling the forward
// channel raised to `power`: p = (1 - e^{-2 power lambda}) / 2.
double forward_error_probability(const SplGenerator& g, double power);

// Product over generator supports of the purity parameter nu of the local
// inverse map; approaches gamma(layer) for weak noise and lower-bounds the
// sampling overhead of any unbiased mitigation.
double purity_overhead_bound(const SplLayer& layer);

}  // namespace qemscope
