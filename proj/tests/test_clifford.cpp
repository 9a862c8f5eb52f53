#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "qemscope/clifford.hpp"
#include "qemscope/rng.hpp"

using qemscope::CliffordLayer;
using qemscope::conjugate_adjoint;
using qemscope::conjugate_forward;
using qemscope::MirroredCircuitSpec;
using qemscope::NoisyCircuit;
using qemscope::PauliString;
using qemscope::random_brickwork;
using qemscope::Rng;
using qemscope::SqCliffords;

TEST_CASE("single-qubit table closes over 24 distinct gates") {
  const auto& table = SqCliffords::instance();
  std::set<std::string> names;
  for (int id = 0; id < SqCliffords::kCount; ++id) {
    const auto& g = table.gate(id);
    names.insert(g.name);
    // identity letter maps to itself with sign +1
    CHECK(g.img[0] == 0);
    CHECK(g.sgn[0] == 1);
    // conjugation table matches the dense 2x2 unitary built from the H/S word
    oracles::Cmat u = oracles::sq_gate_matrix(g.name);
    for (int letter = 1; letter < 4; ++letter) {
      oracles::Cmat img = u * oracles::pauli_matrix_1q(letter) * u.adjoint();
      oracles::Cmat expect =
          static_cast<double>(g.sgn[letter]) * oracles::pauli_matrix_1q(g.img[letter]);
      CHECK((img - expect).norm() < 1e-12);
    }
    // tabulated inverse undoes the gate up to global phase
    oracles::Cmat v = oracles::sq_gate_matrix(table.gate(g.inverse).name);
    oracles::Cmat prod = v * u;
    CHECK(std::abs(std::abs(prod.trace()) - 2.0) < 1e-12);
    CHECK((prod - (prod.trace() / 2.0) * oracles::Cmat::Identity(2, 2)).norm() < 1e-12);
  }
  CHECK(names.size() == SqCliffords::kCount);
}

TEST_CASE("aliases resolve to the right conjugation action") {
  const auto& table = SqCliffords::instance();
  struct Expect {
    const char* alias;
    int img_x, sgn_x, img_z, sgn_z;
  };
  // conjugation images of X and Z under each alias
  for (const auto& e : std::vector<Expect>{{"I", 1, 1, 3, 1},
                                           {"X", 1, 1, 3, -1},
                                           {"Y", 1, -1, 3, -1},
                                           {"Z", 1, -1, 3, 1},
                                           {"H", 3, 1, 1, 1},
                                           {"S", 2, 1, 3, 1},
                                           {"SDG", 2, -1, 3, 1},
                                           {"SX", 1, 1, 2, -1},
                                           {"SXDG", 1, 1, 2, 1}}) {
    const auto& g = table.gate(table.by_name(e.alias));
    CHECK(g.img[1] == e.img_x);
    CHECK(g.sgn[1] == e.sgn_x);
    CHECK(g.img[3] == e.img_z);
    CHECK(g.sgn[3] == e.sgn_z);
  }
  CHECK_THROWS_AS(table.by_name("BOGUS"), std::invalid_argument);
}

TEST_CASE("layer conjugation matches dense matrix conjugation") {
  Rng rng(55);
  const int n = 3;
  for (int trial = 0; trial < 30; ++trial) {
    Rng stream = rng.derive(trial);
    auto layers = random_brickwork(n, 2, stream);
    const CliffordLayer& layer = layers[trial % 2];
    PauliString p = qemscope::random_pauli(n, rng);
    auto [dense_img, dense_sign] = oracles::dense_conjugate(n, layer, p);
    PauliString q = p;
    int sign = 1;
    conjugate_forward(layer, q, sign);
    CHECK(q.text() == dense_img.text());
    CHECK(sign == dense_sign);
  }
}

TEST_CASE("adjoint conjugation inverts forward") {
  Rng rng(66);
  const int n = 5;
  auto layers = random_brickwork(n, 4, rng);
  for (const auto& layer : layers) {
    for (int trial = 0; trial < 20; ++trial) {
      PauliString p = qemscope::random_pauli(n, rng);
      PauliString q = p;
      int sign = 1;
      conjugate_forward(layer, q, sign);
      conjugate_adjoint(layer, q, sign);
      CHECK(q.same_letters(p));
      CHECK(sign == 1);
    }
  }
}

TEST_CASE("conjugation preserves commutation relations") {
  Rng rng(12);
  auto layers = random_brickwork(2, 2, rng);
  for (const auto& layer : layers) {
    auto all = oracles::all_paulis(2);
    for (const auto& a : all) {
      for (const auto& b : all) {
        PauliString ca = a, cb = b;
        int s = 1;
        conjugate_forward(layer, ca, s);
        conjugate_forward(layer, cb, s);
        CHECK(qemscope::commutes(ca, cb) == qemscope::commutes(a, b));
      }
    }
  }
}

TEST_CASE("random_brickwork produces alternating adjacent pairs") {
  Rng a(31), b(31);
  auto layers = random_brickwork(6, 5, a);
  auto again = random_brickwork(6, 5, b);
  REQUIRE(layers.size() == 5);
  for (int l = 0; l < 5; ++l) {
    int offset = l % 2;
    size_t expected_pairs = (6 - offset) / 2;
    CHECK(layers[l].cnots.size() == expected_pairs);
    for (size_t k = 0; k < layers[l].cnots.size(); ++k) {
      auto [c, t] = layers[l].cnots[k];
      CHECK(t == c + 1);
      CHECK(c == offset + 2 * static_cast<int>(k));
    }
    CHECK(layers[l].sq.size() == 6);
    for (uint8_t id : layers[l].sq) CHECK(id < SqCliffords::kCount);
    CHECK(layers[l].cnots == again[l].cnots);
    CHECK(layers[l].sq == again[l].sq);
  }
}

namespace {

NoisyCircuit make_circuit(int n, int L, double eps, uint64_t seed) {
  Rng rng(seed);
  NoisyCircuit c;
  c.n = n;
  c.noise = qemscope::sample_model(n, L, eps, rng);
  c.unitaries = random_brickwork(n, L, rng);
  return c;
}

}  // namespace

TEST_CASE("propagate damping is the product of per-layer fidelities") {
  Rng rng(71);
  NoisyCircuit c = make_circuit(5, 6, 0.05, 9);
  for (int trial = 0; trial < 10; ++trial) {
    PauliString obs = qemscope::random_pauli(5, rng);
    auto traj = qemscope::propagate(c, obs);
    REQUIRE(static_cast<int>(traj.strings.size()) == c.depth());
    double k = 1.0;
    for (int l = 0; l < c.depth(); ++l) k *= qemscope::fidelity(c.noise.layers[l], traj.strings[l]);
    CHECK(traj.damping == doctest::Approx(k).epsilon(1e-12));
    CHECK(std::abs(traj.sign) == 1);
  }
}

TEST_CASE("propagate matches dense Heisenberg conjugation through the circuit") {
  NoisyCircuit c = make_circuit(3, 3, 0.0, 17);
  Rng rng(81);
  for (int trial = 0; trial < 15; ++trial) {
    PauliString obs = qemscope::random_pauli(3, rng);
    auto traj = qemscope::propagate(c, obs);
    // string at layer l is the observable conjugated back through layers >= l
    oracles::Cmat m = oracles::pauli_matrix(obs);
    for (int l = c.depth() - 1; l >= 0; --l) {
      oracles::Cmat u = oracles::layer_matrix(3, c.unitaries[l]);
      m = u.adjoint() * m * u;
      if (l == 0) {
        PauliString bare = PauliString::from_text(traj.strings[0].text());
        CHECK((m - static_cast<double>(traj.sign) * oracles::pauli_matrix(bare)).norm() < 1e-9);
      } else {
        // letters must match even where we skip the sign bookkeeping
        PauliString bare = PauliString::from_text(traj.strings[l].text());
        oracles::Cmat pm = oracles::pauli_matrix(bare);
        CHECK(std::min((m - pm).norm(), (m + pm).norm()) < 1e-9);
      }
    }
  }
}

TEST_CASE("stabilizer observables have ideal expectation exactly 1") {
  NoisyCircuit c = make_circuit(3, 4, 0.02, 23);
  Rng rng(91);
  auto observables = qemscope::stabilizer_observables(c, 8, rng);
  REQUIRE(observables.size() == 8);
  oracles::Cvec psi = oracles::statevector(3, c.unitaries);
  for (const auto& obs : observables) {
    CHECK(!obs.is_identity());
    std::complex<double> val = psi.dot(oracles::pauli_matrix(obs) * psi);
    CHECK(val.real() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(val.imag()) < 1e-10);
  }
}

namespace {

MirroredCircuitSpec make_mirrored(int n, int half_depth, double eps, std::vector<int> t_qubits,
                                  uint64_t seed) {
  Rng rng(seed);
  MirroredCircuitSpec spec;
  spec.n = n;
  spec.half_depth = half_depth;
  spec.t_qubits = std::move(t_qubits);
  spec.first_half = random_brickwork(n, half_depth, rng);
  spec.noise = qemscope::sample_model(n, 2 * half_depth, eps, rng);
  return spec;
}

// Dense density-matrix simulation of the noisy mirrored circuit with all
// noise rates multiplied by `power`; returns <Z^n> at the end.
double dense_mirrored_expectation(const MirroredCircuitSpec& spec, double power) {
  const int n = spec.n;
  const int dim = 1 << n;
  oracles::Cvec psi0 = oracles::Cvec::Zero(dim);
  psi0(0) = 1.0;
  oracles::Cmat rho = psi0 * psi0.adjoint();
  // boundary: H everywhere, then T on the marked qubits
  oracles::Cmat h = oracles::sq_gate_matrix("H");
  oracles::Cmat t(2, 2);
  t << 1, 0, 0, std::polar(1.0, M_PI / 4);
  oracles::Cmat boundary = oracles::Cmat::Identity(dim, dim);
  for (int q = 0; q < n; ++q) boundary = oracles::embed_1q(n, q, h) * boundary;
  for (int q : spec.t_qubits) boundary = oracles::embed_1q(n, q, t) * boundary;
  rho = boundary * rho * boundary.adjoint();
  auto scaled = [&](int l) {
    qemscope::SplLayer layer = spec.noise.layers[l];
    for (auto& g : layer.generators) g.rate *= power;
    return layer;
  };
  for (int l = 0; l < spec.half_depth; ++l) {
    rho = oracles::apply_spl_channel(scaled(l), n, rho);
    oracles::Cmat u = oracles::layer_matrix(n, spec.first_half[l]);
    rho = u * rho * u.adjoint();
  }
  for (int l = spec.half_depth; l < 2 * spec.half_depth; ++l) {
    rho = oracles::apply_spl_channel(scaled(l), n, rho);
    oracles::Cmat u = oracles::layer_matrix(n, spec.first_half[2 * spec.half_depth - 1 - l]);
    rho = u.adjoint() * rho * u;
  }
  rho = boundary.adjoint() * rho * boundary;
  PauliString zn(n);
  for (int q = 0; q < n; ++q) zn.set_letter(q, qemscope::kZ);
  return (oracles::pauli_matrix(zn) * rho).trace().real();
}

}  // namespace

TEST_CASE("mirrored fidelity products reproduce the dense noisy expectation") {
  for (uint64_t seed : {101ull, 102ull}) {
    MirroredCircuitSpec spec = make_mirrored(3, 2, 0.08, {0, 2}, seed);
    auto products = qemscope::mirrored_fidelity_products(spec);
    REQUIRE(products.size() == 4);  // 2^{N_T}
    for (double g : {1.0, 2.0, 3.0}) {
      double sum = 0.0;
      for (double c : products) sum += std::pow(c, g);
      double expect = dense_mirrored_expectation(spec, g);
      CHECK(sum / products.size() == doctest::Approx(expect).epsilon(1e-9));
    }
  }
}

TEST_CASE("mirrored products are plain damping factors in special cases") {
  // noiseless: every branch is exactly 1
  MirroredCircuitSpec spec = make_mirrored(4, 3, 0.0, {1, 3}, 7);
  for (double c : qemscope::mirrored_fidelity_products(spec)) CHECK(c == 1.0);
  // no T gates: a single Clifford branch
  MirroredCircuitSpec plain = make_mirrored(4, 3, 0.05, {}, 8);
  auto products = qemscope::mirrored_fidelity_products(plain);
  CHECK(products.size() == 1);
  CHECK(products[0] > 0.0);
  CHECK(products[0] < 1.0);
}

TEST_CASE("monte-carlo mirrored products agree with the exact mean") {
  MirroredCircuitSpec spec = make_mirrored(4, 2, 0.1, {0, 1, 2, 3}, 13);
  auto exact = qemscope::mirrored_fidelity_products(spec);
  double exact_mean = 0.0;
  for (double c : exact) exact_mean += c / exact.size();
  Rng rng(3);
  auto sampled = qemscope::mirrored_fidelity_products(spec, 20000, rng);
  CHECK(sampled.size() == 20000);
  double mc_mean = 0.0;
  for (double c : sampled) mc_mean += c / sampled.size();
  CHECK(mc_mean == doctest::Approx(exact_mean).epsilon(0.02));
}

TEST_CASE("exact mirrored enumeration guards large T counts") {
  MirroredCircuitSpec spec = make_mirrored(21, 1, 0.01,
                                           {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15,
                                            16, 17, 18, 19, 20},
                                           5);
  CHECK_THROWS_AS(qemscope::mirrored_fidelity_products(spec), std::length_error);
}

TEST_CASE("exponent statistics sum the rates") {
  Rng rng(19);
  qemscope::NoiseModel m = qemscope::sample_model(8, 10, 0.01, rng);
  auto stats = qemscope::exponent_statistics(m);
  double sum = 0.0, sumsq = 0.0;
  for (const auto& layer : m.layers) {
    for (const auto& g : layer.generators) {
      sum += g.rate;
      sumsq += g.rate * g.rate;
    }
  }
  CHECK(stats.mean == doctest::Approx(sum).epsilon(1e-12));
  CHECK(stats.variance == doctest::Approx(sumsq).epsilon(1e-12));
  // scale laws: sum ~ eps N L / 2, sum of squares ~ eps^2 N L / 18
  CHECK(stats.mean == doctest::Approx(0.01 * 8 * 10 / 2.0).epsilon(0.15));
  CHECK(stats.variance == doctest::Approx(0.01 * 0.01 * 8 * 10 / 18.0).epsilon(0.25));
}
