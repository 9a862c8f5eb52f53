#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "qemscope/clifford.hpp"
#include "qemscope/pauli.hpp"
#include "qemscope/spl_noise.hpp"

namespace qemscope {

// Matrix-product operator diagonal in the Pauli basis: the represented map is
// M[.] = sum_phi r_phi sigma_phi . sigma_phi, stored as a bond-contracted
// product of per-site tensors A_q[phi] (left-bond x right-bond real matrices,
// one per physical Pauli letter).  r_phi = prod_q A_q[phi_q].
class DiagonalPauliMpo {
 public:
  explicit DiagonalPauliMpo(int n);  // identity map: every diagonal element 1

  int n() const { return static_cast<int>(sites_.size()); }
  std::vector<int> bond_dims() const;  // length n-1
  int max_bond_dim() const;

  std::array<Eigen::MatrixXd, 4>& site(int q) { return sites_[q]; }
  const std::array<Eigen::MatrixXd, 4>& site(int q) const { return sites_[q]; }

  // Diagonal element r_beta; cost O(n * chi^2).
  double value(const PauliString& beta) const;

  // Frobenius norm of the diagonal vector (sqrt of sum over 4^n entries).
  double norm() const;

  // Element-wise (diagonal) product with another map; bond dims multiply.
  void hadamard_multiply(const DiagonalPauliMpo& other);

  // Physical-index relabeling r'_phi = r_{perm[phi]} on one site.
  void permute_site(int q, const std::array<uint8_t, 4>& perm);

  // Merged two-site relabeling for an entangling gate on adjacent sites
  // (q, q+1): r'_{(b1 b2)} = r_{perm[4*b1+b2]}, followed by an exact split.
  void permute_pair(int q, const std::array<uint8_t, 16>& perm);

  // Canonicalization sweep with rank-capped SVD truncation.  Singular values
  // below zero_tol * sigma_max are numerical zeros and dropped free of charge;
  // weight beyond the cap is discarded and reported as the relative 2-norm
  // ||pre - post|| / ||post||.
  double compress(int chi, double zero_tol = 1e-14);

  // Descending singular values of one bond of the canonicalized MPO.  Links
  // are 1-based cut positions: bond `link` in [1, n-1] joins sites link-1
  // and link.
  Eigen::VectorXd link_singular_values(int link) const;

 private:
  std::vector<std::array<Eigen::MatrixXd, 4>> sites_;
};

// Exact-rank diagonal MPO of the layer's inverse noise: diagonal element
// 1/fidelity(layer, phi).  Bond rank <= 4 (2 for a single generator).
DiagonalPauliMpo noise_inverse_mpo(const SplLayer& layer);

struct TemMap {
  DiagonalPauliMpo mpo;
  int chi = 0;
  std::vector<double> per_layer_truncation;  // relative discard per C_chi event

  explicit TemMap(int n) : mpo(n) {}
};

// One iteration step: multiply in the inverse noise of `layer`, compress.
void apply_inverse_noise(TemMap& m, const SplLayer& layer);
// One iteration step: relabel the diagonal by the layer conjugation, compress.
void conjugate_clifford(TemMap& m, const CliffordLayer& layer);

// Full iteration over the circuit: M_0 = Id, then inverse noise + Clifford
// conjugation per layer, compressing to chi after each step.
TemMap build_tem(const NoisyCircuit& circuit, int chi);

double diagonal_element(const TemMap& m, const PauliString& beta);

// Accumulated data-driven compression-error estimator E(chi, L).
double compression_error_estimate(const TemMap& m);

struct SingularSpectrum {
  int link = 0;
  Eigen::VectorXd values;    // descending
  Eigen::VectorXd relative;  // values / values[0]
  double lambda1 = 0.0;      // median relaxation rate
  double lambda2 = 0.0;      // regularized Euclidean norm of the rates
};

SingularSpectrum link_spectrum(const TemMap& m, const NoiseModel& noise, int link);

// Maximal link rank of the first-order network Id + propagated single-
// generator inverse deviations; approximately 0.5 L^2 for brickwork circuits.
int threshold_bond_dimension(const NoisyCircuit& circuit);
// Per-link variant (1-based cut position, as in link_singular_values).
int threshold_link_rank(const NoisyCircuit& circuit, int link);

// Closed-form systematic compression error: NL eps^2/30 at or above the
// threshold chi = L^2/2, with the singular-value tail term added below it.
double below_threshold_error(int n, int L, double epsilon, double chi);

}  // namespace qemscope
