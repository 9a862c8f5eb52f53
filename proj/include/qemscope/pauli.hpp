#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qemscope/rng.hpp"

namespace qemscope {

// Single-qubit Pauli letters.  The numeric values follow the I,X,Y,Z order
// used throughout: 0=I, 1=X, 2=Y, 3=Z.
enum PauliLetter : int { kI = 0, kX = 1, kY = 2, kZ = 3 };

// N-qubit Pauli string in symplectic (x|z) bit-mask representation.
//
// Bit q of the masks is qubit q; qubit 0 is the leftmost tensor factor.  The
// operator represented is i^phase * prod_q sigma_{letter(q)}, with phase mod 4.
// The phase is carried through products and Clifford conjugation but ignored
// by all noise-fidelity code (conjugation signs cancel there).
class PauliString {
 public:
  PauliString() : n_(0), phase_(0) {}
  explicit PauliString(int n) : n_(n), x_((n + 63) / 64, 0), z_((n + 63) / 64, 0), phase_(0) {}

  static PauliString identity(int n) { return PauliString(n); }
  // Parses "IXYZ..." (one letter per qubit).  Throws std::invalid_argument.
  static PauliString from_text(const std::string& text);
  std::string text() const;

  int n() const { return n_; }
  int phase() const { return phase_; }
  void set_phase(int p) { phase_ = ((p % 4) + 4) % 4; }

  bool x_bit(int q) const { return (x_[q >> 6] >> (q & 63)) & 1; }
  bool z_bit(int q) const { return (z_[q >> 6] >> (q & 63)) & 1; }

  int letter(int q) const {
    int x = x_bit(q) ? 1 : 0;
    int z = z_bit(q) ? 1 : 0;
    return x ? (z ? kY : kX) : (z ? kZ : kI);
  }

  void set_letter(int q, int letter);

  int weight() const;
  bool is_identity() const;

  // Group product with i-phase accumulation: (*this) * rhs.
  PauliString product(const PauliString& rhs) const;

  // Equality of letters (masks), ignoring phase.
  bool same_letters(const PauliString& rhs) const { return x_ == rhs.x_ && z_ == rhs.z_; }
  bool operator==(const PauliString& rhs) const {
    return n_ == rhs.n_ && phase_ == rhs.phase_ && same_letters(rhs);
  }

  uint64_t hash() const;

  friend bool commutes(const PauliString& p, const PauliString& q);

 private:
  int n_;
  std::vector<uint64_t> x_, z_;
  int phase_;
};

// True iff the symplectic form sum_q (x_p z_q + z_p x_q) vanishes mod 2.
// Throws std::invalid_argument on size mismatch.
bool commutes(const PauliString& p, const PauliString& q);

// Appendix-style anticommutant pairing: flips the commutation relation of
// `beta` with the nontrivial `target` by rewriting one letter at the lowest
// nontrivial qubit of `target`.  Involution: applying twice returns `beta`.
// Throws std::invalid_argument if target is the identity.
PauliString anticommutant_bijection(const PauliString& target, const PauliString& beta);

// Uniform over the 4^n strings; phase 0.  Deterministic under the stream.
PauliString random_pauli(int n, Rng& rng);

}  // namespace qemscope
