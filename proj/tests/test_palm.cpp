#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "dbdpp/debranges.hpp"
#include "dbdpp/discretize.hpp"
#include "dbdpp/errors.hpp"
#include "dbdpp/palm.hpp"
#include "dbdpp/quadrature.hpp"
#include "dbdpp/sampler.hpp"

using namespace dbdpp;

namespace {
constexpr double kPi = 3.14159265358979323846;

DiscretizedKernel sine_dk(double half = 6.0, int per_unit = 12) {
  return discretize(DeBrangesFunction::exponential(kPi),
                    build_grid(-half, half, static_cast<int>(2 * half * per_unit)));
}

DiscretizedKernel rank2_dk() {
  auto f = DeBrangesFunction::polynomial({{0.0, 1.0}, {0.4, 1.2}});
  return discretize(f, build_graded_grid(1024.0, 16));
}
}  // namespace

TEST_CASE("single conditioning point reproduces the scalar downdate") {
  auto dk = sine_dk(3.0);
  const double q = 0.237;  // off-grid on purpose
  auto palm = palm_kernel(dk, {q});

  auto k = dk.kernel_fn;
  const double kqq = k(q, q);
  for (int i = 0; i < dk.size(); i += 7) {
    for (int j = 0; j < dk.size(); j += 7) {
      const double xi = dk.grid.nodes[i], xj = dk.grid.nodes[j];
      const double expect = k(xi, xj) - k(xi, q) * k(q, xj) / kqq;
      const double w = std::sqrt(dk.grid.weights[i] * dk.grid.weights[j]);
      CHECK(palm.matrix(i, j) == doctest::Approx(w * expect).epsilon(1e-10));
      CHECK(palm.kernel_fn(xi, xj) == doctest::Approx(expect).epsilon(1e-10));
    }
  }
}

TEST_CASE("conditioned kernel vanishes through the conditioning points") {
  auto dk = sine_dk(4.0);
  std::vector<double> q{-1.3, 0.5, 2.0};
  auto palm = palm_kernel(dk, q);
  for (double qj : q)
    for (int i = 0; i < palm.size(); ++i)
      CHECK(std::abs(palm.kernel_fn(qj, palm.grid.nodes[i])) <= 1e-8);
  CHECK(std::abs(palm.kernel_fn(q[0], q[1])) <= 1e-8);
  for (int i = 0; i < palm.size(); ++i) {
    CHECK(palm.eigenvalues[i] >= 0.0);
    CHECK(palm.eigenvalues[i] <= 1.0);
  }
}

TEST_CASE("conditioning a finite-rank process drops the rank by one") {
  auto dk = rank2_dk();
  auto palm = palm_kernel(dk, {0.3});
  int big_before = 0, big_after = 0;
  for (int i = 0; i < dk.size(); ++i) {
    if (dk.eigenvalues[i] > 0.5) ++big_before;
    if (palm.eigenvalues[i] > 0.5) ++big_after;
  }
  CHECK(big_before == 2);
  CHECK(big_after == 1);
  // conditioned process then puts down exactly one point
  auto draws = sample_many(palm, 3, 200);
  int ones = 0;
  for (const auto& x : draws)
    if (x.points.size() == 1) ++ones;
  CHECK(ones >= 195);
}

TEST_CASE("truncated product: pinned values and boundary inclusion") {
  PalmCondition pc{{0.0}, {1.0}};
  Configuration x{{2.0}};
  CHECK(psi_bar_trunc(pc, x, 5.0, 0.5, 1.0) == doctest::Approx(0.25));

  PalmCondition same{{0.0, 2.0}, {0.0, 2.0}};
  // identical lists are rejected (targets must avoid conditioning points),
  // so the every-factor-one case is exercised with a fresh functional below
  CHECK_THROWS_AS(psi_bar_trunc(same, x, 5.0, 0.5, 1.0), ConfigError);

  Configuration empty{};
  CHECK(psi_bar_trunc(pc, empty, 5.0, 0.5, 3.75) == doctest::Approx(3.75));

  // particle exactly at the target point kills the product
  Configuration at_p{{1.0, 3.0}};
  CHECK(psi_bar_trunc(pc, at_p, 5.0, 0.5, 1.0) == doctest::Approx(0.0));

  // both truncation boundaries are inclusive
  Configuration edge{{5.0}};
  CHECK(psi_bar_trunc(pc, edge, 5.0, 0.5, 1.0) ==
        doctest::Approx(std::pow(4.0 / 5.0, 2)));
  Configuration annulus{{0.5}};
  CHECK(psi_bar_trunc(pc, annulus, 5.0, 0.5, 1.0) ==
        doctest::Approx(std::pow(-0.5 / 0.5, 2)));
  CHECK(psi_bar_trunc(pc, annulus, 5.0, 0.5001, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("truncated product changes only when a cutoff crosses a particle") {
  PalmCondition pc{{0.0}, {1.0}};
  Configuration x{{-3.0, 0.5, 2.0}};
  const double v = psi_bar_trunc(pc, x, 2.5, 0.3, 1.0);
  CHECK(psi_bar_trunc(pc, x, 2.9, 0.3, 1.0) == doctest::Approx(v));
  CHECK(psi_bar_trunc(pc, x, 3.0, 0.3, 1.0) != doctest::Approx(v));
  CHECK(psi_bar_trunc(pc, x, 2.5, 0.49, 1.0) == doctest::Approx(v));
  CHECK(psi_bar_trunc(pc, x, 2.5, 0.51, 1.0) != doctest::Approx(v));
}

TEST_CASE("unnormalized products with swapped roles are exact reciprocals") {
  PalmCondition fwd{{0.0}, {1.0}};
  PalmCondition rev{{1.0}, {0.0}};
  Configuration x{{2.5, -1.7, 4.2}};
  const double a = psi_bar_trunc(fwd, x, 10.0, 0.1, 1.0);
  const double b = psi_bar_trunc(rev, x, 10.0, 0.1, 1.0);
  CHECK(a * b == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normalizer is exactly one when targets equal conditioning points") {
  // p level with q: use two interleaved but distinct lists whose factors
  // cancel nothing; the p = q degenerate normalization is reached through
  // a functional that is identically one: q={a,b}, p={b,a}
  auto dk = sine_dk(4.0);
  PalmCondition swap{{-0.7, 0.7}, {0.7, -0.7}};
  auto palm = palm_kernel(dk, swap.q);
  auto est = estimate_normalizer(swap, 4.0, 1e-3, palm, 200, 5);
  // each particle contributes ((x-b)(x-a)/((x-a)(x-b)))^2 = 1
  CHECK(est.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(est.std_error == doctest::Approx(0.0));
}

TEST_CASE("Monte-Carlo and determinant normalizers agree") {
  auto dk = sine_dk(6.0);
  PalmCondition pc{{0.0}, {0.3}};
  auto palm = palm_kernel(dk, pc.q);
  const double exact = normalizer_exact(pc, 6.0, 1e-6, palm);
  auto est = estimate_normalizer(pc, 6.0, 1e-6, palm, 20000, 11, 0, 2);
  CHECK(std::abs(est.value - exact) <= 3.0 * est.std_error);
  CHECK(est.std_error / est.value < 0.05);
}

TEST_CASE("limit schedule: finite-rank case stabilizes exactly") {
  auto dk = rank2_dk();
  PalmCondition pc{{0.1}, {0.6}};
  auto palm = palm_kernel(dk, pc.q);
  Configuration x{{-2.0, 0.8}};
  std::vector<ScheduleStep> sched{
      {3.0, 0.5}, {1025.0, 0.3}, {1026.0, 0.3}, {1027.0, 0.3}, {1028.0, 0.3}};
  auto lim = psi_bar_limit(pc, x, sched, palm, 500, 21);
  REQUIRE(lim.steps.size() == 5);
  // once the cutoff clears the window and the exclusion the gaps, nothing
  // moves: the last four values are bit-identical
  for (int k = 2; k < 5; ++k)
    CHECK(lim.steps[k].value == lim.steps[1].value);
  CHECK(lim.stabilized);
  CHECK(lim.final_estimate.value == lim.steps[4].value);
}

TEST_CASE("limit schedule: successive differences shrink for the flat process") {
  auto dk = sine_dk(8.0);
  PalmCondition pc{{0.0}, {0.3}};
  auto palm = palm_kernel(dk, pc.q);
  Configuration x{{-4.0, 1.0, 2.2}};
  std::vector<ScheduleStep> sched{{5.0, 0.2}, {10.0, 0.1}, {20.0, 0.05}};
  auto lim = psi_bar_limit(pc, x, sched, palm, 20000, 31, 2);
  REQUIRE(lim.steps.size() == 3);
  const double d1 = std::abs(lim.steps[1].value - lim.steps[0].value);
  const double d2 = std::abs(lim.steps[2].value - lim.steps[1].value);
  CHECK(d2 < d1);

  std::vector<ScheduleStep> bad{{5.0, 0.2}, {4.0, 0.1}};
  CHECK_THROWS_AS(psi_bar_limit(pc, x, bad, palm, 100, 1), ConfigError);
  std::vector<ScheduleStep> bad2{{5.0, 0.2}, {6.0, 0.3}};
  CHECK_THROWS_AS(psi_bar_limit(pc, x, bad2, palm, 100, 1), ConfigError);
}

TEST_CASE("two-sided equivalence check on the flat process") {
  auto dk = sine_dk(6.0);
  PalmCondition pc{{0.0}, {0.3}};
  auto rep = palm_rn_check(pc, dk, 20000, 17, 2.0, 4.0, 2);
  CHECK(rep.normalization.pass);
  CHECK(rep.transfer.pass);
  CHECK(rep.pass);
}

TEST_CASE("two-sided equivalence check on the finite-rank process") {
  auto dk = rank2_dk();
  PalmCondition pc{{0.1}, {0.6}};
  auto rep = palm_rn_check(pc, dk, 8000, 19, 0.5, 2.5, 2);
  CHECK(rep.pass);
}

TEST_CASE("validation and singular conditioning") {
  auto dk = sine_dk(3.0);
  CHECK_THROWS_AS(palm_kernel(dk, {}), ConfigError);
  CHECK_THROWS_AS(palm_kernel(dk, {0.5, 0.5}), ConfigError);
  CHECK_THROWS_AS(palm_kernel(dk, {5.0}), ConfigError);
  CHECK_THROWS_AS(palm_kernel(dk, {0.5, 0.5 + 1e-13}),
                  SingularConditioningError);

  PalmCondition overlap{{0.0, 1.0}, {1.0, 2.0}};
  CHECK_THROWS_AS(overlap.validate(), ConfigError);
  PalmCondition uneven{{0.0}, {1.0, 2.0}};
  CHECK_THROWS_AS(uneven.validate(), ConfigError);

  PalmCondition pc{{0.0}, {0.3}};
  Configuration x{{1.0}};
  CHECK_THROWS_AS(psi_bar_trunc(pc, x, -1.0, 0.1, 1.0), ConfigError);
  CHECK_THROWS_AS(psi_bar_trunc(pc, x, 1.0, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(psi_bar_trunc(pc, x, 1.0, 0.1, 0.0), ConfigError);
}
