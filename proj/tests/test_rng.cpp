#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "dbdpp/rng.hpp"

using dbdpp::CounterRng;

TEST_CASE("same key reproduces the same stream") {
  CounterRng a(12345, 7);
  CounterRng b(12345, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("streams with different indices are distinct") {
  CounterRng a(12345, 0);
  CounterRng b(12345, 1);
  int agree = 0;
  for (int i = 0; i < 256; ++i)
    if (a.next_u64() == b.next_u64()) ++agree;
  CHECK(agree == 0);
}

TEST_CASE("different seeds decorrelate") {
  CounterRng a(1, 0);
  CounterRng b(2, 0);
  int agree = 0;
  for (int i = 0; i < 256; ++i)
    if (a.next_u64() == b.next_u64()) ++agree;
  CHECK(agree == 0);
}

TEST_CASE("uniform01 lies in [0,1) and has the right mean") {
  CounterRng r(987654321, 3);
  const int n = 200000;
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sumsq += u * u;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  // 5 sigma bands for mean 1/2, variance 1/12.
  CHECK(std::abs(mean - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(var - 1.0 / 12.0) < 0.005);
}

TEST_CASE("no short cycles in one stream") {
  CounterRng r(42, 0);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 4096; ++i) CHECK(seen.insert(r.next_u64()).second);
}
