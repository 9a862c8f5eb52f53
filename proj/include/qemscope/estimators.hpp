#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qemscope/clifford.hpp"
#include "qemscope/rng.hpp"
#include "qemscope/tem_mpo.hpp"

namespace qemscope {

// Gain schedule for zero-noise extrapolation with probabilistic error
// amplification: R >= 2 strictly increasing gains G_i >= 1 and the shot
// split over them.
struct ZneConfig {
  std::vector<double> gains;
  std::vector<int64_t> shots;

  int r() const { return static_cast<int>(gains.size()); }
  int64_t total_shots() const;
  void validate() const;  // throws std::invalid_argument
};

struct EstimatorResult {
  double mean = 0.0;
  double std_error = 0.0;
  int64_t shots_used = 0;
  // Realized sampling overhead Gamma = std_error^2 * M, i.e. the variance
  // relative to a unit-variance direct measurement.
  double overhead = 0.0;
};

// Principal branch W(x) for x >= -1/e, |w e^w - x| <= 1e-12, bracketed
// bisection start plus Halley refinement.  Throws std::domain_error below the
// branch point.
double lambert_w(double x);

// Overhead-minimizing two-point gain schedule for damping K in (0, 1):
// G1 = 1, G2 = 1 + (1 + W(1/e)) / ln(1/K).  K >= 1 or K <= 0 throws.
std::pair<double, double> optimal_gains(double k);

// Shots proportional to |sum_i G_i (G_i - G_j)| K^{-G_j}, rounded to integers
// summing exactly to m by largest remainder.  Requires m >= R.
std::vector<int64_t> optimal_shot_allocation(const std::vector<double>& gains, double k,
                                             int64_t m);

// Random extrapolation error of the log-linear fit:
// sqrt(sum_j A_j^2 K^{-2 G_j} / |S_j|) / D with A_j = sum_i G_i (G_i - G_j)
// and D = R sum G^2 - (sum G)^2.
double zne_random_error(const ZneConfig& config, double k);

// Unweighted least squares of ln(mean) vs gain; returns (F0, dF0) with
// F0 = e^b and dF0 = F0 * Delta_b from the closed-form intercept error.
// Non-positive means throw std::domain_error (increase shots); degenerate
// gains throw std::invalid_argument.
std::pair<double, double> fit_exponential(const std::vector<double>& gains,
                                          const std::vector<double>& means,
                                          const std::vector<double>& stds);

// Magnitude of the extrapolation bias for a sum of 2^{N_T} exponentials:
// (G1 G2 / 2) (1 - 2^{-N_T}) * (sum of squared rates).  The bias itself is an
// underestimate (F0 < truth).
double zne_extrapolation_bias(const ExponentStatistics& stats, double g1, double g2, int n_t);

// Shot-level simulators.  The observable must be a stabilizer of the ideal
// circuit (Z-type string at the input frame, ideal expectation +1); anything
// else throws std::invalid_argument.  Results are bit-reproducible for any
// thread count: shot i always uses stream rng.derive(i) and partial sums are
// combined in fixed 4096-shot chunks.
EstimatorResult pec_simulate(const NoisyCircuit& circuit, const PauliString& observable,
                             int64_t shots, Rng& rng, int threads = 1);
EstimatorResult zne_simulate(const NoisyCircuit& circuit, const PauliString& observable,
                             const ZneConfig& config, Rng& rng, int threads = 1);
EstimatorResult tem_simulate(const NoisyCircuit& circuit, const PauliString& observable,
                             const TemMap& tem, int64_t shots, Rng& rng, int threads = 1);

}  // namespace qemscope
