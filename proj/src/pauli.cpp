#include "qemscope/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace qemscope {

namespace {

// i-exponent of sigma_a * sigma_b = i^t sigma_{a xor b} for literal Paulis.
constexpr int kProductPhase[4][4] = {
    // I  X  Y  Z
    {0, 0, 0, 0},  // I
    {0, 0, 1, 3},  // X
    {0, 3, 0, 1},  // Y
    {0, 1, 3, 0},  // Z
};

void check_same_n(const PauliString& p, const PauliString& q) {
  if (p.n() != q.n()) throw std::invalid_argument("Pauli strings act on different qubit counts");
}

}  // namespace

PauliString PauliString::from_text(const std::string& text) {
  PauliString p(static_cast<int>(text.size()));
  for (int q = 0; q < p.n_; ++q) {
    switch (text[q]) {
      case 'I': break;
      case 'X': p.set_letter(q, kX); break;
      case 'Y': p.set_letter(q, kY); break;
      case 'Z': p.set_letter(q, kZ); break;
      default: throw std::invalid_argument("invalid Pauli letter: " + std::string(1, text[q]));
    }
  }
  return p;
}

std::string PauliString::text() const {
  static const char* letters = "IXYZ";
  std::string out(n_, 'I');
  for (int q = 0; q < n_; ++q) out[q] = letters[letter(q)];
  return out;
}

void PauliString::set_letter(int q, int letter) {
  uint64_t bit = 1ull << (q & 63);
  uint64_t xbit = (letter == kX || letter == kY) ? bit : 0;
  uint64_t zbit = (letter == kZ || letter == kY) ? bit : 0;
  x_[q >> 6] = (x_[q >> 6] & ~bit) | xbit;
  z_[q >> 6] = (z_[q >> 6] & ~bit) | zbit;
}

int PauliString::weight() const {
  int w = 0;
  for (size_t i = 0; i < x_.size(); ++i) w += std::popcount(x_[i] | z_[i]);
  return w;
}

bool PauliString::is_identity() const {
  for (size_t i = 0; i < x_.size(); ++i)
    if (x_[i] | z_[i]) return false;
  return true;
}

PauliString PauliString::product(const PauliString& rhs) const {
  check_same_n(*this, rhs);
  PauliString out(n_);
  int phase = phase_ + rhs.phase_;
  for (int q = 0; q < n_; ++q) phase += kProductPhase[letter(q)][rhs.letter(q)];
  for (size_t i = 0; i < x_.size(); ++i) {
    out.x_[i] = x_[i] ^ rhs.x_[i];
    out.z_[i] = z_[i] ^ rhs.z_[i];
  }
  out.phase_ = phase % 4;
  return out;
}

uint64_t PauliString::hash() const {
  uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<uint64_t>(n_);
  auto mix = [&h](uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (uint64_t w : x_) mix(w);
  for (uint64_t w : z_) mix(w);
  return h;
}

bool commutes(const PauliString& p, const PauliString& q) {
  check_same_n(p, q);
  uint64_t parity = 0;
  for (size_t i = 0; i < p.x_.size(); ++i)
    parity ^= static_cast<uint64_t>(std::popcount((p.x_[i] & q.z_[i]) ^ (p.z_[i] & q.x_[i])));
  return (parity & 1) == 0;
}

PauliString anticommutant_bijection(const PauliString& target, const PauliString& beta) {
  check_same_n(target, beta);
  if (target.is_identity())
    throw std::invalid_argument("anticommutant pairing needs a nontrivial target");

  int pivot = -1;
  for (int q = 0; q < target.n(); ++q) {
    if (target.letter(q) != kI) {
      pivot = q;
      break;
    }
  }

  // Cycle (0, a, a mod 3 + 1, (a+1) mod 3 + 1) for pivot letter a; its inverse
  // permutation pi shifts the pivot letter of beta by two positions, which
  // flips the local (anti)commutation with the pivot letter while leaving all
  // other qubits untouched.
  int a = target.letter(pivot);
  int omega[4] = {0, a, a % 3 + 1, (a + 1) % 3 + 1};
  int pi[4];
  for (int i = 0; i < 4; ++i) pi[omega[i]] = i;

  PauliString out = beta;
  out.set_letter(pivot, omega[(pi[beta.letter(pivot)] + 2) % 4]);
  return out;
}

PauliString random_pauli(int n, Rng& rng) {
  PauliString p(n);
  for (int q = 0; q < n; ++q) p.set_letter(q, static_cast<int>(rng.next_below(4)));
  return p;
}

}  // namespace qemscope
