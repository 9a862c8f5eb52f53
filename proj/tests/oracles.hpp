#pragma once

// Independent dense reference implementations used only by the tests.  These
// recompute the library's claims from first principles (explicit 2^n matrices,
// density-matrix channel evolution, grid search, brute-force rank) so the two
// code paths share no logic.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "qemscope/clifford.hpp"
#include "qemscope/pauli.hpp"
#include "qemscope/spl_noise.hpp"

namespace oracles {

using Cmat = Eigen::MatrixXcd;
using Cvec = Eigen::VectorXcd;
using qemscope::CliffordLayer;
using qemscope::PauliString;
using qemscope::SplLayer;

inline Cmat kron(const Cmat& a, const Cmat& b) {
  Cmat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Cmat pauli_matrix_1q(int letter) {
  Cmat m(2, 2);
  const std::complex<double> i1(0.0, 1.0);
  switch (letter) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i1, i1, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("bad letter");
  }
  return m;
}

// Dense matrix of a Pauli string including its i^phase prefactor.
// Qubit 0 is the leftmost tensor factor.
inline Cmat pauli_matrix(const PauliString& p) {
  Cmat m = pauli_matrix_1q(p.letter(0));
  for (int q = 1; q < p.n(); ++q) m = kron(m, pauli_matrix_1q(p.letter(q)));
  const std::complex<double> i1(0.0, 1.0);
  std::complex<double> ph(1.0, 0.0);
  for (int k = 0; k < p.phase(); ++k) ph *= i1;
  return ph * m;
}

// Dense 2x2 matrix of a tabulated single-qubit Clifford from its H/S word.
inline Cmat sq_gate_matrix(const std::string& word) {
  Cmat h(2, 2), s(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  h << r, r, r, -r;
  s << 1, 0, 0, std::complex<double>(0, 1);
  Cmat m = Cmat::Identity(2, 2);
  if (word == "I") return m;
  for (char c : word) {
    if (c == 'H')
      m = m * h;
    else if (c == 'S')
      m = m * s;
    else
      throw std::invalid_argument("bad gate word");
  }
  return m;
}

inline Cmat embed_1q(int n, int q, const Cmat& u) {
  Cmat m = (q == 0) ? u : Cmat::Identity(2, 2);
  for (int k = 1; k < n; ++k) m = kron(m, k == q ? u : Cmat::Identity(2, 2));
  return m;
}

inline Cmat cnot_matrix(int n, int control, int target) {
  const int dim = 1 << n;
  Cmat m = Cmat::Zero(dim, dim);
  for (int b = 0; b < dim; ++b) {
    // qubit 0 is the most significant bit
    int cbit = (b >> (n - 1 - control)) & 1;
    int out = cbit ? b ^ (1 << (n - 1 - target)) : b;
    m(out, b) = 1.0;
  }
  return m;
}

// Full 2^n x 2^n unitary of one layer: CNOTs act first, then sq gates.
inline Cmat layer_matrix(int n, const CliffordLayer& layer) {
  const int dim = 1 << n;
  Cmat m = Cmat::Identity(dim, dim);
  for (auto [c, t] : layer.cnots) m = cnot_matrix(n, c, t) * m;
  const auto& table = qemscope::SqCliffords::instance();
  Cmat sq = Cmat::Identity(1, 1);
  for (int q = 0; q < n; ++q) sq = kron(sq, sq_gate_matrix(table.gate(layer.sq[q]).name));
  return sq * m;
}

// Applies the SPL layer's forward channel to a density matrix: each generator
// contributes rho -> (1+e^{-2l})/2 rho + (1-e^{-2l})/2 P rho P.
inline Cmat apply_spl_channel(const SplLayer& layer, int n, const Cmat& rho) {
  Cmat out = rho;
  for (const auto& g : layer.generators) {
    PauliString p(n);
    p.set_letter(g.q1, g.axis1);
    if (g.two_qubit()) p.set_letter(g.q2, g.axis2);
    Cmat pm = pauli_matrix(p);
    double flip = (1.0 - std::exp(-2.0 * g.rate)) / 2.0;
    out = (1.0 - flip) * out + flip * (pm * out * pm.adjoint());
  }
  return out;
}

// Pauli-transfer eigenvalue of the layer channel on string beta, computed
// densely: tr(sigma_beta Lambda(sigma_beta)) / 2^n.
inline double dense_fidelity(const SplLayer& layer, int n, const PauliString& beta) {
  Cmat sigma = pauli_matrix(beta);
  Cmat mapped = apply_spl_channel(layer, n, sigma);
  return ((sigma * mapped).trace() / static_cast<double>(1 << n)).real();
}

// Enumerates all 4^n Pauli strings in lexicographic letter order.
inline std::vector<PauliString> all_paulis(int n) {
  std::vector<PauliString> out;
  int64_t total = 1;
  for (int q = 0; q < n; ++q) total *= 4;
  for (int64_t idx = 0; idx < total; ++idx) {
    PauliString p(n);
    int64_t rem = idx;
    for (int q = n - 1; q >= 0; --q) {
      p.set_letter(q, static_cast<int>(rem & 3));
      rem >>= 2;
    }
    out.push_back(p);
  }
  return out;
}

// Conjugates beta by the dense layer unitary and identifies the resulting
// signed Pauli string.  Throws if the image is not a signed Pauli.
inline std::pair<PauliString, int> dense_conjugate(int n, const CliffordLayer& layer,
                                                   const PauliString& beta) {
  Cmat u = layer_matrix(n, layer);
  Cmat img = u * pauli_matrix(beta) * u.adjoint();
  for (const auto& cand : all_paulis(n)) {
    Cmat cm = pauli_matrix(cand);
    for (int sign : {1, -1}) {
      if ((img - static_cast<double>(sign) * cm).norm() < 1e-9) return {cand, sign};
    }
  }
  throw std::runtime_error("conjugated image is not a signed Pauli string");
}

// Golden-section-free scalar grid minimizer: dense scan then local refine.
inline double grid_minimize(const std::function<double(double)>& f, double lo, double hi,
                            int coarse = 4000, int refine_rounds = 30) {
  double best_x = lo, best_v = f(lo);
  for (int i = 0; i <= coarse; ++i) {
    double x = lo + (hi - lo) * i / coarse;
    double v = f(x);
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  double step = (hi - lo) / coarse;
  for (int round = 0; round < refine_rounds; ++round) {
    for (double x : {best_x - step, best_x + step}) {
      if (x < lo || x > hi) continue;
      double v = f(x);
      if (v < best_v) {
        best_v = v;
        best_x = x;
      }
    }
    step /= 2;
  }
  return best_x;
}

// Dense statevector after applying layered unitaries to |0...0>.
inline Cvec statevector(int n, const std::vector<CliffordLayer>& layers) {
  Cvec psi = Cvec::Zero(1 << n);
  psi(0) = 1.0;
  for (const auto& layer : layers) psi = layer_matrix(n, layer) * psi;
  return psi;
}

}  // namespace oracles
