#ifndef DBDPP_STATS_HPP
#define DBDPP_STATS_HPP

#include <cstdint>
#include <vector>

#include "dbdpp/debranges.hpp"
#include "dbdpp/discretize.hpp"

namespace dbdpp {

struct McSummary {
  double mean = 0;
  double variance = 0;   // unbiased sample variance
  double std_error = 0;  // sqrt(variance / n)
  std::int64_t n = 0;
};

// Streaming mean/variance accumulator. merge() combines two accumulators
// as if their streams had been concatenated, so chunked (threaded)
// accumulation reproduces the sequential result.
class McAccumulator {
 public:
  void add(double x);
  void merge(const McAccumulator& other);
  McSummary summary() const;  // needs at least two observations
  std::int64_t count() const { return n_; }

 private:
  std::int64_t n_ = 0;
  double mean_ = 0;
  double m2_ = 0;
};

McSummary mc_summary(const std::vector<double>& values);

// Number of points of x in [lo, hi], both endpoints included.
int count_in(const Configuration& x, double lo, double hi);

struct Verdict {
  bool pass = false;
  double lhs_mean = 0;
  double lhs_se = 0;
  double rhs_mean = 0;
  double rhs_se = 0;
  double diff = 0;
  double combined_se = 0;
  double k_sigma = 0;
};

Verdict verdict(const McSummary& lhs, const McSummary& rhs,
                double k_sigma = 3.0);
Verdict verdict(const McSummary& lhs, double exact, double k_sigma = 3.0);

struct BinnedIntensity {
  std::vector<double> bin_edges;           // size bins + 1
  std::vector<std::int64_t> counts;        // raw totals over all samples
  std::vector<double> counts_per_unit;     // counts / (n_samples * width)
  std::vector<double> expected;            // per-sample integral of the
                                           // intensity over the bin
  double discrepancy = 0;  // sum over bins of (mean - expected)^2 / expected
};

BinnedIntensity intensity_histogram(const DeBrangesFunction& f,
                                    const std::vector<Configuration>& samples,
                                    double lo, double hi, int bins);

}  // namespace dbdpp

#endif
