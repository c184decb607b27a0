#include "dbdpp/stats.hpp"

#include <algorithm>
#include <cmath>

#include "dbdpp/errors.hpp"
#include "dbdpp/quadrature.hpp"

namespace dbdpp {

void McAccumulator::add(double x) {
  if (!std::isfinite(x))
    throw ConfigError("McAccumulator: non-finite observation");
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

void McAccumulator::merge(const McAccumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double d = other.mean_ - mean_;
  mean_ += d * nb / (na + nb);
  m2_ += other.m2_ + d * d * na * nb / (na + nb);
  n_ += other.n_;
}

McSummary McAccumulator::summary() const {
  if (n_ < 2)
    throw ConfigError("McAccumulator: need at least two observations");
  McSummary s;
  s.n = n_;
  s.mean = mean_;
  s.variance = m2_ / static_cast<double>(n_ - 1);
  s.std_error = std::sqrt(s.variance / static_cast<double>(n_));
  return s;
}

McSummary mc_summary(const std::vector<double>& values) {
  McAccumulator acc;
  for (double v : values) acc.add(v);
  return acc.summary();
}

int count_in(const Configuration& x, double lo, double hi) {
  if (!(lo <= hi)) throw ConfigError("count_in: interval is empty");
  int c = 0;
  for (double p : x.points)
    if (lo <= p && p <= hi) ++c;
  return c;
}

namespace {

Verdict make_verdict(const McSummary& lhs, double rhs_mean, double rhs_se,
                     double k_sigma) {
  if (!(k_sigma > 0)) throw ConfigError("verdict: k_sigma must be positive");
  Verdict v;
  v.lhs_mean = lhs.mean;
  v.lhs_se = lhs.std_error;
  v.rhs_mean = rhs_mean;
  v.rhs_se = rhs_se;
  v.diff = lhs.mean - rhs_mean;
  v.combined_se = std::hypot(lhs.std_error, rhs_se);
  v.k_sigma = k_sigma;
  v.pass = std::abs(v.diff) <= k_sigma * v.combined_se;
  return v;
}

}  // namespace

Verdict verdict(const McSummary& lhs, const McSummary& rhs, double k_sigma) {
  return make_verdict(lhs, rhs.mean, rhs.std_error, k_sigma);
}

Verdict verdict(const McSummary& lhs, double exact, double k_sigma) {
  return make_verdict(lhs, exact, 0.0, k_sigma);
}

BinnedIntensity intensity_histogram(const DeBrangesFunction& f,
                                    const std::vector<Configuration>& samples,
                                    double lo, double hi, int bins) {
  if (samples.size() < 100)
    throw ConfigError(
        "intensity_histogram: need at least 100 samples for a stable "
        "comparison");
  if (!(lo < hi)) throw ConfigError("intensity_histogram: empty window");
  if (bins < 1) throw ConfigError("intensity_histogram: need at least one bin");

  BinnedIntensity h;
  h.bin_edges.resize(bins + 1);
  const double w = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) h.bin_edges[b] = lo + w * b;
  h.bin_edges[bins] = hi;

  // cumulative closed counts difference: edge points land in the lower bin
  // and the bin totals add up to count_in(x, lo, hi) exactly
  h.counts.assign(bins, 0);
  for (const Configuration& x : samples) {
    int prev = 0;
    for (int b = 0; b < bins; ++b) {
      const int cum = count_in(x, lo, h.bin_edges[b + 1]);
      h.counts[b] += cum - prev;
      prev = cum;
    }
  }

  const double n = static_cast<double>(samples.size());
  h.counts_per_unit.resize(bins);
  h.expected.resize(bins);
  h.discrepancy = 0;
  for (int b = 0; b < bins; ++b) {
    auto g = build_grid(h.bin_edges[b], h.bin_edges[b + 1], 16);
    double mass = 0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      mass += g.weights[i] * f.intensity(g.nodes[i]);
    h.expected[b] = mass;
    h.counts_per_unit[b] =
        static_cast<double>(h.counts[b]) / (n * (h.bin_edges[b + 1] - h.bin_edges[b]));
    const double d = static_cast<double>(h.counts[b]) / n - mass;
    h.discrepancy += d * d / std::max(mass, 1e-12);
  }
  return h;
}

}  // namespace dbdpp
