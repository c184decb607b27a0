#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dbdpp/errors.hpp"
#include "dbdpp/rng.hpp"
#include "dbdpp/stats.hpp"

using namespace dbdpp;

TEST_CASE("accumulator reproduces closed-form mean and variance") {
  McAccumulator acc;
  for (int i = 0; i < 1000; ++i) acc.add(i % 2);
  auto s = acc.summary();
  CHECK(s.n == 1000);
  CHECK(s.mean == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.variance == doctest::Approx(0.25 * 1000.0 / 999.0).epsilon(1e-12));
  CHECK(s.std_error == doctest::Approx(std::sqrt(s.variance / 1000.0)));

  McAccumulator flat;
  for (int i = 0; i < 10; ++i) flat.add(3.25);
  auto fs = flat.summary();
  CHECK(fs.mean == doctest::Approx(3.25));
  CHECK(fs.variance == doctest::Approx(0.0));
}

TEST_CASE("merge is exactly chunking-invariant") {
  CounterRng rng(7, 0);
  std::vector<double> xs(5000);
  for (double& x : xs) x = rng.uniform01() * 10.0 - 3.0;

  McAccumulator whole;
  for (double x : xs) whole.add(x);

  for (std::size_t chunk : {1u, 7u, 100u, 1250u}) {
    McAccumulator merged;
    std::size_t i = 0;
    while (i < xs.size()) {
      McAccumulator part;
      for (std::size_t j = i; j < std::min(i + chunk, xs.size()); ++j)
        part.add(xs[j]);
      merged.merge(part);
      i += chunk;
    }
    auto a = whole.summary(), b = merged.summary();
    CHECK(b.n == a.n);
    CHECK(b.mean == doctest::Approx(a.mean).epsilon(1e-12));
    CHECK(b.variance == doctest::Approx(a.variance).epsilon(1e-12));
  }
}

TEST_CASE("summary needs two points and finite input") {
  McAccumulator acc;
  CHECK_THROWS_AS(acc.summary(), ConfigError);
  acc.add(1.0);
  CHECK_THROWS_AS(acc.summary(), ConfigError);
  CHECK_THROWS_AS(acc.add(std::nan("")), ConfigError);
  CHECK(mc_summary({1.0, 2.0, 3.0}).mean == doctest::Approx(2.0));
  CHECK_THROWS_AS(mc_summary({1.0}), ConfigError);
}

TEST_CASE("count_in includes both endpoints and is additive under splits") {
  Configuration x{{-1.0, 0.0, 0.25, 0.5, 0.5, 1.0, 2.0}};
  CHECK(count_in(x, 0.0, 1.0) == 5);
  CHECK(count_in(x, 0.5, 0.5) == 2);   // degenerate closed interval
  CHECK(count_in(x, -5.0, 5.0) == 7);
  CHECK(count_in(x, 3.0, 4.0) == 0);
  CHECK_THROWS_AS(count_in(x, 1.0, 0.0), ConfigError);
}

TEST_CASE("verdict arithmetic and pass rule") {
  McSummary a{1.02, 1e-2, 0.01, 400};
  McSummary b{1.00, 1e-2, 0.01, 400};
  auto v = verdict(a, b, 3.0);
  CHECK(v.diff == doctest::Approx(0.02));
  CHECK(v.combined_se == doctest::Approx(std::sqrt(2.0) * 0.01));
  CHECK(v.pass);

  auto tight = verdict(a, b, 1.0);
  CHECK_FALSE(tight.pass);

  auto ve = verdict(a, 1.0, 3.0);
  CHECK(ve.rhs_se == 0.0);
  CHECK(ve.combined_se == doctest::Approx(0.01));
  CHECK(ve.pass);
  CHECK_FALSE(verdict(a, 0.9, 3.0).pass);
  CHECK_THROWS_AS(verdict(a, b, 0.0), ConfigError);
}

TEST_CASE("histogram totals reproduce the window count exactly") {
  CounterRng rng(11, 0);
  std::vector<Configuration> samples(200);
  for (auto& s : samples) {
    const int k = static_cast<int>(rng.next_u64() % 5);
    for (int i = 0; i < k; ++i) s.points.push_back(rng.uniform01() * 4.0 - 2.0);
    // plant boundary points to exercise the edge rule
    s.points.push_back(-1.0);
    s.points.push_back(0.5);
  }

  auto f = DeBrangesFunction::exponential(1.0);
  auto h = intensity_histogram(f, samples, -1.0, 1.0, 8);
  REQUIRE(h.bin_edges.size() == 9);
  std::int64_t total = 0;
  for (auto c : h.counts) total += c;
  std::int64_t direct = 0;
  for (const auto& s : samples) direct += count_in(s, -1.0, 1.0);
  CHECK(total == direct);

  double width_mass = 0;
  for (int b = 0; b < 8; ++b) width_mass += h.expected[b];
  // flat intensity 1/pi over a window of length 2
  CHECK(width_mass == doctest::Approx(2.0 / 3.14159265358979323846).epsilon(1e-12));
  CHECK(h.discrepancy >= 0.0);
}

TEST_CASE("histogram validation") {
  auto f = DeBrangesFunction::exponential(1.0);
  std::vector<Configuration> few(10);
  CHECK_THROWS_AS(intensity_histogram(f, few, 0.0, 1.0, 4), ConfigError);
  std::vector<Configuration> enough(100);
  CHECK_THROWS_AS(intensity_histogram(f, enough, 1.0, 1.0, 4), ConfigError);
  CHECK_THROWS_AS(intensity_histogram(f, enough, 0.0, 1.0, 0), ConfigError);
}
