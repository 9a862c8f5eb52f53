#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "qemscope/rng.hpp"

using qemscope::Rng;

TEST_CASE("same seed reproduces the stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds give different streams") {
  Rng a(1), b(2);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += a.next_u64() == b.next_u64();
  CHECK(same == 0);
}

TEST_CASE("derive is order independent and collision free") {
  Rng root(7);
  // deriving twice with the same coordinates matches exactly
  CHECK(root.derive(3, 1).next_u64() == root.derive(3, 1).next_u64());
  // distinct coordinates give distinct first draws
  std::set<uint64_t> seen;
  for (uint64_t a = 0; a < 16; ++a)
    for (uint64_t b = 0; b < 16; ++b) seen.insert(root.derive(a, b).next_u64());
  CHECK(seen.size() == 256);
  // drawing from one derived stream does not disturb another
  Rng s1 = root.derive(5);
  uint64_t expect = root.derive(6).next_u64();
  s1.next_u64();
  s1.next_u64();
  CHECK(root.derive(6).next_u64() == expect);
}

TEST_CASE("uniform doubles have the right moments") {
  Rng rng(123);
  double sum = 0, sumsq = 0;
  const int m = 200000;
  for (int i = 0; i < m; ++i) {
    double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sumsq += u * u;
  }
  CHECK(std::abs(sum / m - 0.5) < 0.005);
  CHECK(std::abs(sumsq / m - 1.0 / 3.0) < 0.005);
}

TEST_CASE("normal deviates have the right moments") {
  Rng rng(9);
  double sum = 0, sumsq = 0;
  const int m = 200000;
  for (int i = 0; i < m; ++i) {
    double x = rng.next_normal(2.0, 3.0);
    sum += x;
    sumsq += x * x;
  }
  double mean = sum / m;
  double var = sumsq / m - mean * mean;
  CHECK(std::abs(mean - 2.0) < 0.03);
  CHECK(std::abs(var - 9.0) < 0.15);
}

TEST_CASE("bernoulli frequency matches p") {
  Rng rng(11);
  int hits = 0;
  const int m = 100000;
  for (int i = 0; i < m; ++i) hits += rng.next_bernoulli(0.3);
  CHECK(std::abs(hits / static_cast<double>(m) - 0.3) < 0.01);
}

TEST_CASE("next_below stays in range and covers it") {
  Rng rng(5);
  std::set<uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    uint64_t v = rng.next_below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}
