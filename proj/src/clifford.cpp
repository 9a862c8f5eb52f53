#include "qemscope/clifford.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>

namespace qemscope {

namespace {

struct Action {
  // Conjugation images of X and Z with signs; Y and I follow.
  int img_x, sgn_x, img_z, sgn_z;

  bool operator<(const Action& o) const {
    return std::tie(img_x, sgn_x, img_z, sgn_z) < std::tie(o.img_x, o.sgn_x, o.img_z, o.sgn_z);
  }
};

// Sign of the Y image: g Y g^dag = i * (g X g^dag)(g Z g^dag).
int y_sign(const Action& a) {
  // sigma_p sigma_q = i^t sigma_{p xor q}; for anticommuting p,q the total
  // phase i^{1+t} is real (+1 for t=3, -1 for t=1).
  static constexpr int phase[4][4] = {
      {0, 0, 0, 0}, {0, 0, 1, 3}, {0, 3, 0, 1}, {0, 1, 3, 0}};
  int t = phase[a.img_x][a.img_z];
  return a.sgn_x * a.sgn_z * (t == 3 ? 1 : -1);
}

int y_image(const Action& a) {
  return a.img_x ^ a.img_z;  // xor of symplectic codes = remaining letter
}

// Composition of conjugations: (a.b)(P) = a(b(P)).
Action compose(const Action& a, const Action& b) {
  auto apply = [&a](int letter, int sign, int& out_letter, int& out_sign) {
    switch (letter) {
      case kX: out_letter = a.img_x; out_sign = sign * a.sgn_x; break;
      case kY: out_letter = y_image(a); out_sign = sign * y_sign(a); break;
      case kZ: out_letter = a.img_z; out_sign = sign * a.sgn_z; break;
      default: throw std::logic_error("compose: unexpected letter");
    }
  };
  Action r{};
  apply(b.img_x, b.sgn_x, r.img_x, r.sgn_x);
  apply(b.img_z, b.sgn_z, r.img_z, r.sgn_z);
  return r;
}

}  // namespace

SqCliffords::SqCliffords() {
  const Action h{kZ, 1, kX, 1};
  const Action s{kY, 1, kZ, 1};

  std::map<Action, int> ids;
  std::deque<std::pair<Action, std::string>> queue;
  const Action identity{kX, 1, kZ, 1};
  queue.emplace_back(identity, "");
  ids[identity] = 0;
  int next_id = 1;
  std::vector<std::pair<Action, std::string>> found{{identity, ""}};

  while (!queue.empty()) {
    auto [act, word] = queue.front();
    queue.pop_front();
    // Appending a generator letter multiplies the operator on the right, so
    // BFS order yields shortest words; H before S breaks ties alphabetically.
    for (auto [gen, letter] : {std::pair<Action, char>{h, 'H'}, {s, 'S'}}) {
      Action candidate = compose(act, gen);
      if (ids.emplace(candidate, next_id).second) {
        found.emplace_back(candidate, word + letter);
        queue.emplace_back(candidate, word + letter);
        ++next_id;
      }
    }
  }
  if (found.size() != kCount) throw std::logic_error("single-qubit Clifford closure failed");

  for (int id = 0; id < kCount; ++id) {
    const Action& a = found[id].first;
    Gate& g = gates_[id];
    g.name = found[id].second.empty() ? "I" : found[id].second;
    g.img = {static_cast<uint8_t>(kI), static_cast<uint8_t>(a.img_x),
             static_cast<uint8_t>(y_image(a)), static_cast<uint8_t>(a.img_z)};
    g.sgn = {1, static_cast<int8_t>(a.sgn_x), static_cast<int8_t>(y_sign(a)),
             static_cast<int8_t>(a.sgn_z)};
  }
  for (int id = 0; id < kCount; ++id) {
    const Action& a = found[id].first;
    for (int jd = 0; jd < kCount; ++jd) {
      Action prod = compose(a, found[jd].first);
      if (prod.img_x == kX && prod.sgn_x == 1 && prod.img_z == kZ && prod.sgn_z == 1) {
        gates_[id].inverse = static_cast<uint8_t>(jd);
        break;
      }
    }
  }
}

const SqCliffords& SqCliffords::instance() {
  static const SqCliffords table;
  return table;
}

int SqCliffords::by_name(const std::string& name) const {
  static const std::map<std::string, Action> aliases = {
      {"I", {kX, 1, kZ, 1}},    {"X", {kX, 1, kZ, -1}},  {"Y", {kX, -1, kZ, -1}},
      {"Z", {kX, -1, kZ, 1}},   {"H", {kZ, 1, kX, 1}},   {"S", {kY, 1, kZ, 1}},
      {"SDG", {kY, -1, kZ, 1}}, {"SX", {kX, 1, kY, -1}}, {"SXDG", {kX, 1, kY, 1}},
  };
  for (int id = 0; id < kCount; ++id)
    if (gates_[id].name == name) return id;
  auto it = aliases.find(name);
  if (it != aliases.end()) {
    const Action& a = it->second;
    for (int id = 0; id < kCount; ++id)
      if (gates_[id].img[kX] == a.img_x && gates_[id].sgn[kX] == a.sgn_x &&
          gates_[id].img[kZ] == a.img_z && gates_[id].sgn[kZ] == a.sgn_z)
        return id;
  }
  throw std::invalid_argument("unknown single-qubit Clifford name: " + name);
}

namespace {

void conjugate_cnot(PauliString& p, int& sign, int c, int t) {
  bool xc = p.x_bit(c), zc = p.z_bit(c), xt = p.x_bit(t), zt = p.z_bit(t);
  if (xc && zt && !(xt ^ zc)) sign = -sign;
  // X_c -> X_c X_t, Z_t -> Z_c Z_t.
  int new_t = (xt ^ xc) ? (zt ? kY : kX) : (zt ? kZ : kI);
  int new_c = xc ? ((zc ^ zt) ? kY : kX) : ((zc ^ zt) ? kZ : kI);
  p.set_letter(t, new_t);
  p.set_letter(c, new_c);
}

void conjugate_sq(const SqCliffords::Gate& g, PauliString& p, int& sign, int q) {
  int letter = p.letter(q);
  if (letter == kI) return;
  p.set_letter(q, g.img[letter]);
  sign *= g.sgn[letter];
}

}  // namespace

void conjugate_forward(const CliffordLayer& layer, PauliString& p, int& sign) {
  const auto& table = SqCliffords::instance();
  for (auto [c, t] : layer.cnots) conjugate_cnot(p, sign, c, t);
  for (int q = 0; q < static_cast<int>(layer.sq.size()); ++q)
    conjugate_sq(table.gate(layer.sq[q]), p, sign, q);
}

void conjugate_adjoint(const CliffordLayer& layer, PauliString& p, int& sign) {
  const auto& table = SqCliffords::instance();
  for (int q = 0; q < static_cast<int>(layer.sq.size()); ++q)
    conjugate_sq(table.gate(table.gate(layer.sq[q]).inverse), p, sign, q);
  for (auto [c, t] : layer.cnots) conjugate_cnot(p, sign, c, t);
}

Trajectory propagate(const NoisyCircuit& circuit, const PauliString& observable) {
  if (observable.n() != circuit.n) throw std::invalid_argument("propagate: qubit count mismatch");
  Trajectory traj;
  traj.strings.resize(circuit.depth(), PauliString(circuit.n));
  traj.sign = (observable.phase() == 2) ? -1 : 1;
  PauliString p = observable;
  p.set_phase(0);
  double log_k = 0.0;
  for (int l = circuit.depth() - 1; l >= 0; --l) {
    conjugate_adjoint(circuit.unitaries[l], p, traj.sign);
    traj.strings[l] = p;
    for (const auto& g : circuit.noise.layers[l].generators)
      if (g.anticommutes(p)) log_k -= 2.0 * g.rate;
  }
  traj.damping = std::exp(log_k);
  return traj;
}

std::vector<CliffordLayer> random_brickwork(int n, int L, Rng& rng) {
  if (n < 2) throw std::invalid_argument("random_brickwork: need at least 2 qubits");
  std::vector<CliffordLayer> layers(L);
  for (int l = 0; l < L; ++l) {
    CliffordLayer& layer = layers[l];
    Rng stream = rng.derive(static_cast<uint64_t>(l));
    for (int q = (l % 2 == 0) ? 0 : 1; q + 1 < n; q += 2) layer.cnots.emplace_back(q, q + 1);
    layer.sq.resize(n);
    for (int q = 0; q < n; ++q)
      layer.sq[q] = static_cast<uint8_t>(stream.derive(q).next_below(SqCliffords::kCount));
  }
  return layers;
}

std::vector<PauliString> stabilizer_observables(const NoisyCircuit& circuit, int count, Rng& rng) {
  std::vector<PauliString> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Rng stream = rng.derive(static_cast<uint64_t>(i));
    PauliString g(circuit.n);
    bool nontrivial = false;
    while (!nontrivial) {
      for (int q = 0; q < circuit.n; ++q) {
        bool z = stream.next_bernoulli(0.5);
        g.set_letter(q, z ? kZ : kI);
        nontrivial |= z;
      }
    }
    int sign = 1;
    for (const auto& layer : circuit.unitaries) conjugate_forward(layer, g, sign);
    g.set_phase(sign < 0 ? 2 : 0);
    out.push_back(g);
  }
  return out;
}

namespace {

double mirrored_product(const MirroredCircuitSpec& spec, uint64_t assignment) {
  // Mid-circuit branch string: X or Y on T-gate qubits, X elsewhere.
  PauliString p(spec.n);
  for (int q = 0; q < spec.n; ++q) p.set_letter(q, kX);
  for (size_t i = 0; i < spec.t_qubits.size(); ++i)
    p.set_letter(spec.t_qubits[i], ((assignment >> i) & 1) ? kY : kX);

  int sign = 1;
  double log_c = 0.0;
  const int h = spec.half_depth;
  // Backward sweep over the 2h core layers.  Layer h+k (1-based) is the
  // adjoint of first-half layer h+1-k, so propagating backward through it is
  // a forward conjugation.
  for (int l = 2 * h - 1; l >= 0; --l) {
    if (l >= h)
      conjugate_forward(spec.first_half[2 * h - 1 - l], p, sign);
    else
      conjugate_adjoint(spec.first_half[l], p, sign);
    for (const auto& g : spec.noise.layers[l].generators)
      if (g.anticommutes(p)) log_c -= 2.0 * g.rate;
  }
  return std::exp(log_c);
}

}  // namespace

std::vector<double> mirrored_fidelity_products(const MirroredCircuitSpec& spec) {
  const size_t nt = spec.t_qubits.size();
  if (nt > 20) throw std::length_error("mirrored_fidelity_products: exact mode limited to 20 T gates");
  std::vector<double> out;
  out.reserve(size_t{1} << nt);
  for (uint64_t a = 0; a < (uint64_t{1} << nt); ++a) out.push_back(mirrored_product(spec, a));
  return out;
}

std::vector<double> mirrored_fidelity_products(const MirroredCircuitSpec& spec, int samples,
                                               Rng& rng) {
  std::vector<double> out;
  out.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    uint64_t a = rng.derive(static_cast<uint64_t>(i)).next_u64();
    if (spec.t_qubits.size() < 64) a &= (uint64_t{1} << spec.t_qubits.size()) - 1;
    out.push_back(mirrored_product(spec, a));
  }
  return out;
}

ExponentStatistics exponent_statistics(const NoiseModel& noise) {
  ExponentStatistics stats;
  for (const auto& layer : noise.layers) {
    for (const auto& g : layer.generators) {
      stats.mean += g.rate;
      stats.variance += g.rate * g.rate;
    }
  }
  return stats;
}

}  // namespace qemscope
