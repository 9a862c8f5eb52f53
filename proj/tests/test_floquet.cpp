#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "qemscope/floquet.hpp"

using qemscope::FloquetConfig;
using qemscope::PauliString;

namespace {

constexpr double kPi = 3.14159265358979323846;

FloquetConfig benchmark_config(int n, int t) {
  FloquetConfig c;
  c.n = n;
  c.t = t;
  c.j = kPi / 4;
  c.theta = 1.5;
  c.phi = 2.63;
  return c;
}

PauliString parity(int n) {
  PauliString p(n);
  for (int q = 0; q < n; ++q) p.set_letter(q, qemscope::kZ);
  return p;
}

}  // namespace

TEST_CASE("config validation") {
  FloquetConfig c = benchmark_config(6, 1);
  c.validate();
  CHECK(c.depth() == 4);
  c.n = 8;  // not 4k+2
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.n = 6;
  c.t = -1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.t = 1;
  c.j = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.j = 2.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("heisenberg interaction is unitary and becomes a swap at j = pi/4") {
  for (double j : {0.1, 0.5, kPi / 4, 1.2}) {
    Eigen::Matrix4cd u = qemscope::heisenberg_interaction(j);
    CHECK((u * u.adjoint() - Eigen::Matrix4cd::Identity()).norm() < 1e-12);
  }
  Eigen::Matrix4cd swap = Eigen::Matrix4cd::Zero();
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1;
  std::complex<double> phase = std::polar(1.0, -kPi / 4);
  CHECK((qemscope::heisenberg_interaction(kPi / 4) - phase * swap).norm() < 1e-12);
}

TEST_CASE("named gate sequence multiplies to the interaction up to global phase") {
  for (int i = 0; i <= 16; ++i) {
    double j = 0.01 + (kPi / 2 - 0.02) * i / 16.0;
    auto seq = qemscope::partial_swap_decomposition(j);
    CHECK(seq.size() == 12);
    int cnots = 0;
    Eigen::Matrix4cd prod = Eigen::Matrix4cd::Identity();
    for (const auto& [name, u] : seq) {
      prod = u * prod;  // application order
      if (name.rfind("cnot", 0) == 0) ++cnots;
    }
    CHECK(cnots == 3);
    Eigen::Matrix4cd target = qemscope::heisenberg_interaction(j);
    std::complex<double> phase = (target.adjoint() * prod).trace() / 4.0;
    CHECK(std::abs(std::abs(phase) - 1.0) < 1e-10);
    CHECK((prod - phase * target).norm() < 1e-10);
  }
}

TEST_CASE("cnot accounting") {
  FloquetConfig c = benchmark_config(10, 4);
  CHECK(qemscope::cnot_depth(c) == 13);  // 3t + 1
  CHECK(qemscope::cnot_count(c) == 10 / 2 + 4 * 3 * (10 / 2));
}

TEST_CASE("circuit structure: brickwork with a periodic wrap on odd steps") {
  FloquetConfig c = benchmark_config(10, 3);
  auto circuit = qemscope::build_circuit(c);
  REQUIRE(circuit.layers.size() == 4);  // preparation + 3 steps
  // odd steps pair <1,2>...<n-1,0>, even steps pair <0,1>...
  for (int tau = 1; tau <= 3; ++tau) {
    const auto& layer = circuit.layers[tau];
    CHECK(layer.size() == 5);
    bool wrap = false;
    for (const auto& op : layer) {
      CHECK(op.q2 >= 0);
      if (op.q1 == 9 && op.q2 == 0) wrap = true;
      CHECK(op.q1 % 2 == tau % 2);
    }
    CHECK(wrap == (tau % 2 == 1));
  }
}

TEST_CASE("analytic rainbow matches the dense statevector") {
  for (int n : {6, 10}) {
    for (int t = 0; t <= n / 4; ++t) {
      FloquetConfig c = benchmark_config(n, t);
      double exact = qemscope::dual_unitary_exact(c, parity(n));
      double dense = qemscope::statevector_simulate(c, parity(n));
      CHECK(exact == doctest::Approx(dense).epsilon(1e-10));
      // a couple of other product observables
      PauliString zi(n);
      zi.set_letter(n / 2 - 1 - t, qemscope::kZ);
      CHECK(qemscope::dual_unitary_exact(c, zi) ==
            doctest::Approx(qemscope::statevector_simulate(c, zi)).epsilon(1e-10));
      PauliString xx(n);
      xx.set_letter(0, qemscope::kX);
      xx.set_letter(1, qemscope::kX);
      CHECK(qemscope::dual_unitary_exact(c, xx) ==
            doctest::Approx(qemscope::statevector_simulate(c, xx)).epsilon(1e-10));
    }
  }
}

TEST_CASE("quoted benchmark values at N = 122, t = 30") {
  FloquetConfig c = benchmark_config(122, 30);
  double exact = qemscope::dual_unitary_exact(c, parity(122));
  double truncated = qemscope::dual_unitary_truncated(c, parity(122));
  CHECK(exact == doctest::Approx(0.997).epsilon(1e-3));
  CHECK(truncated == doctest::Approx(0.016).epsilon(0.07));
  CHECK(std::abs(truncated - 0.016) < 1e-3);
}

TEST_CASE("mps reproduces the exact state at the exact bond dimension") {
  // generic interaction strength: compare against the dense statevector
  FloquetConfig c = benchmark_config(10, 2);
  c.j = 0.9;
  auto run = qemscope::mps_simulate(c, 1024, parity(10));
  CHECK(run.value == doctest::Approx(qemscope::statevector_simulate(c, parity(10)))
                         .epsilon(1e-8));
  CHECK(run.truncation_weight == doctest::Approx(0.0).epsilon(1e-12));
  REQUIRE(run.max_bond_per_step.size() == 3);
}

TEST_CASE("mps bond growth in the rainbow regime") {
  // Pairs spread by one site per step on each side, so a cut is crossed by
  // the t+1 local pairs plus the pairs threaded through the periodic wrap;
  // the measured maximum bond sits between 2^{t+1} and 2^{min(2t+2, n/2)}.
  FloquetConfig c = benchmark_config(10, 2);
  auto run = qemscope::mps_simulate(c, 1024, parity(10));
  REQUIRE(run.max_bond_per_step.size() == 3);
  CHECK(run.max_bond_per_step[0] == 2);
  CHECK(run.max_bond_per_step[1] == 16);
  CHECK(run.max_bond_per_step[2] == 32);
  for (size_t step = 0; step < run.max_bond_per_step.size(); ++step) {
    int t = static_cast<int>(step);
    CHECK(run.max_bond_per_step[step] >= (1 << std::min(t + 1, 5)));
    CHECK(run.max_bond_per_step[step] <= (1 << std::min(2 * t + 2, 5)));
  }
  CHECK(run.truncation_weight == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("capped mps matches the exact and truncated analytic values") {
  for (int n : {10, 14}) {
    int t = n / 4;
    FloquetConfig c = benchmark_config(n, t);
    // measure the exact bond requirement, then cap at it and at half of it
    auto probe = qemscope::mps_simulate(c, 4096, parity(n));
    int chi_full = *std::max_element(probe.max_bond_per_step.begin(),
                                     probe.max_bond_per_step.end());
    CHECK(chi_full == (n == 10 ? 32 : 128));
    auto full = qemscope::mps_simulate(c, chi_full, parity(n));
    CHECK(full.value == doctest::Approx(qemscope::dual_unitary_exact(c, parity(n)))
                            .epsilon(1e-8));
    CHECK(full.truncation_weight == doctest::Approx(0.0).epsilon(1e-12));
    // half the exact bond discards exactly the sin(theta/2) Schmidt branch of
    // the skewed pair, which is what the truncated analytic state keeps out
    auto capped = qemscope::mps_simulate(c, chi_full / 2, parity(n));
    CHECK(capped.value == doctest::Approx(qemscope::dual_unitary_truncated(c, parity(n)))
                              .epsilon(1e-8));
    CHECK(capped.truncation_weight > 0.0);
  }
}

TEST_CASE("skewed pair correlator") {
  FloquetConfig c = benchmark_config(10, 0);
  CHECK(qemscope::skewed_pair_correlator(c, false) ==
        doctest::Approx(std::sin(1.5)).epsilon(1e-12));
  // the truncated state loses the pair entanglement entirely
  double trunc = qemscope::skewed_pair_correlator(c, true);
  CHECK(std::abs(trunc) < 0.3);
  FloquetConfig deep = benchmark_config(122, 30);
  double exact = qemscope::skewed_pair_correlator(deep, false);
  CHECK(std::abs(exact) > 0.5);
}

TEST_CASE("capacity guards and domain errors") {
  FloquetConfig big = benchmark_config(14, 1);
  CHECK_THROWS_AS(qemscope::statevector_simulate(big, parity(14)), std::length_error);
  FloquetConfig huge = benchmark_config(26, 1);
  CHECK_THROWS_AS(qemscope::mps_simulate(huge, 64, parity(26)), std::length_error);
  FloquetConfig ok = benchmark_config(10, 1);
  CHECK_THROWS_AS(qemscope::mps_simulate(ok, 5000, parity(10)), std::length_error);
  CHECK_THROWS_AS(qemscope::mps_simulate(ok, 0, parity(10)), std::length_error);
  // rainbow oracle: needs the dual-unitary point and t within the regime
  FloquetConfig off = benchmark_config(10, 1);
  off.j = 0.7;
  CHECK_THROWS_AS(qemscope::dual_unitary_exact(off, parity(10)), std::invalid_argument);
  FloquetConfig deep = benchmark_config(10, 3);
  CHECK_THROWS_AS(qemscope::dual_unitary_exact(deep, parity(10)), std::out_of_range);
  // Schmidt tie at theta = pi/2
  FloquetConfig tie = benchmark_config(10, 1);
  tie.theta = kPi / 2;
  CHECK_THROWS_AS(qemscope::dual_unitary_truncated(tie, parity(10)), std::invalid_argument);
}

TEST_CASE("advantage comparison rows") {
  FloquetConfig c = benchmark_config(14, 3);
  qemscope::Rng rng(71);
  qemscope::NoiseModel noise = qemscope::sample_model(14, c.depth(), 0.0014, rng);
  qemscope::ResourceParams params;
  auto rows = qemscope::advantage_comparison(c, noise, params);
  REQUIRE(rows.size() == 3);
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].t == static_cast<int>(i) + 1);
    CHECK(rows[i].depth == 3 * rows[i].t + 1);
    CHECK(rows[i].unmitigated > 0.0);
    CHECK(rows[i].mitigated > 0.0);
    CHECK(rows[i].classical_frontier <= rows[i].classical_modest);
    if (i > 0) CHECK(rows[i].unmitigated > rows[i - 1].unmitigated);
  }
  // mitigation beats the raw quantum error at this noise level
  CHECK(rows.back().mitigated < rows.back().unmitigated);
}
