#ifndef DBDPP_PALM_HPP
#define DBDPP_PALM_HPP

#include <cstdint>
#include <vector>

#include "dbdpp/discretize.hpp"
#include "dbdpp/stats.hpp"

namespace dbdpp {

// Conditioning points q and target points p for comparing the two reduced
// processes. Lists have equal length l >= 1, points are pairwise distinct
// within each list and across the two lists.
struct PalmCondition {
  std::vector<double> q;
  std::vector<double> p;
  void validate() const;
};

// Kernel of the process conditioned to have points at q, on the same grid:
// the Schur complement of the q-block. Rows and columns through any q_j
// vanish; the spectrum stays inside [0, 1] up to quadrature slack.
// q need not hit grid nodes.
DiscretizedKernel palm_kernel(const DiscretizedKernel& dk,
                              const std::vector<double>& q);

// Truncated multiplicative functional: C times the product over particles
// x of X with |x| <= r and min_i |x - q_i| >= eps of prod_i
// ((x - p_i)/(x - q_i))^2. Both boundary cases are included.
double psi_bar_trunc(const PalmCondition& pc, const Configuration& x, double r,
                     double eps, double c);

struct FunctionalEstimate {
  double value = 0;
  double std_error = 0;
  std::int64_t n_samples = 0;
  double r = 0;
  double eps = 0;
};

// C(r, eps) = 1 / E[unnormalized product] under the conditioned process,
// by Monte Carlo on streams stream_offset .. stream_offset + n - 1.
FunctionalEstimate estimate_normalizer(const PalmCondition& pc, double r,
                                       double eps,
                                       const DiscretizedKernel& palm_dk,
                                       int n_samples, std::uint64_t seed,
                                       std::uint64_t stream_offset = 0,
                                       int threads = 1);

// Same constant without sampling: the expectation of a multiplicative
// functional of a determinantal process is a Fredholm determinant, exact
// for the discretized model.
double normalizer_exact(const PalmCondition& pc, double r, double eps,
                        const DiscretizedKernel& palm_dk);

struct ScheduleStep {
  double r = 0;
  double eps = 0;
};

struct PsiBarLimit {
  std::vector<FunctionalEstimate> steps;
  FunctionalEstimate final_estimate;
  bool stabilized = false;
};

// Normalized functional along a truncation schedule (r nondecreasing, eps
// nonincreasing) at a fixed configuration, one shared batch of conditioned
// samples estimating every C(r_k, eps_k). Stabilized when the last (up to
// three) successive differences each fall below max(2 SE, 1e-3).
PsiBarLimit psi_bar_limit(const PalmCondition& pc, const Configuration& x,
                          const std::vector<ScheduleStep>& schedule,
                          const DiscretizedKernel& palm_dk, int n_samples,
                          std::uint64_t seed, int threads = 1);

struct PalmCheckReport {
  Verdict normalization;  // E under Palm(q) of the normalized functional is 1
  Verdict transfer;       // E_Palm(p)[S] vs E_Palm(q)[S * functional]
  bool pass = false;
  double probe_lo = 0, probe_hi = 0;
  double r = 0, eps = 0;
  std::int64_t n_samples = 0;
};

// Two-sided equivalence check between the reduced processes at p and at q,
// with S = count in [probe_lo, probe_hi]. Four disjoint stream blocks keep
// the normalizer independent of the means it scales.
PalmCheckReport palm_rn_check(const PalmCondition& pc,
                              const DiscretizedKernel& dk, int n_samples,
                              std::uint64_t seed, double probe_lo = 2.0,
                              double probe_hi = 4.0, int threads = 1);

}  // namespace dbdpp

#endif
