#include "dbdpp/palm.hpp"

#include <algorithm>
#include <cmath>

#include "dbdpp/errors.hpp"
#include "dbdpp/sampler.hpp"

namespace dbdpp {

namespace {

// a node this close to a conditioning point carries no mass in the
// conditioned process; skipping it avoids 0 * inf in the determinant route
constexpr double kNodeGuard = 1e-12;

void require_finite_distinct(const std::vector<double>& xs, const char* what) {
  for (double x : xs)
    if (!std::isfinite(x)) throw ConfigError(std::string(what) + ": non-finite point");
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      if (xs[i] == xs[j])
        throw ConfigError(std::string(what) + ": points must be distinct");
}

double product_factor(const PalmCondition& pc, double x) {
  double f = 1.0;
  for (std::size_t i = 0; i < pc.q.size(); ++i) {
    const double ratio = (x - pc.p[i]) / (x - pc.q[i]);
    f *= ratio * ratio;
  }
  return f;
}

double min_gap(const std::vector<double>& q, double x) {
  double m = 1e300;
  for (double qi : q) m = std::min(m, std::abs(x - qi));
  return m;
}

// unnormalized truncated product at one configuration
double unnorm(const PalmCondition& pc, const Configuration& x, double r,
              double eps) {
  double u = 1.0;
  for (double pt : x.points) {
    if (std::abs(pt) > r) continue;
    if (min_gap(pc.q, pt) < eps) continue;
    u *= product_factor(pc, pt);
  }
  return u;
}

struct PropagatedMean {
  double value = 0;
  double se = 0;
};

// mean of (scale +- scale_se) * stream, the two factors independent
PropagatedMean scaled_mean(double scale, double scale_se,
                           const McSummary& s) {
  PropagatedMean r;
  r.value = scale * s.mean;
  r.se = std::hypot(scale * s.std_error, s.mean * scale_se);
  return r;
}

}  // namespace

void PalmCondition::validate() const {
  if (q.empty() || q.size() != p.size())
    throw ConfigError("PalmCondition: need equally many target and "
                      "conditioning points, at least one each");
  require_finite_distinct(q, "PalmCondition conditioning points");
  require_finite_distinct(p, "PalmCondition target points");
  // p may meet q across the lists: matching entries contribute unit
  // factors, and p = q is the standard degenerate sanity case
}

DiscretizedKernel palm_kernel(const DiscretizedKernel& dk,
                              const std::vector<double>& q) {
  if (q.empty()) throw ConfigError("palm_kernel: no conditioning points");
  require_finite_distinct(q, "palm_kernel conditioning points");
  if (!dk.kernel_fn)
    throw ConfigError("palm_kernel: kernel has no pointwise evaluator");
  for (double qi : q)
    if (!(dk.grid.lo < qi && qi < dk.grid.hi))
      throw ConfigError(
          "palm_kernel: conditioning point outside the open window");

  const int n = dk.size();
  const int l = static_cast<int>(q.size());
  Eigen::MatrixXd s(l, l);
  for (int a = 0; a < l; ++a)
    for (int b = 0; b <= a; ++b) {
      const double v = dk.kernel_fn(q[a], q[b]);
      s(a, b) = v;
      s(b, a) = v;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success)
    throw NumericalError("palm_kernel: conditioning block decomposition failed");
  const double smax = es.eigenvalues().cwiseAbs().maxCoeff();
  if (es.eigenvalues().minCoeff() <= 1e-12 * std::max(1.0, smax))
    throw SingularConditioningError(
        "palm_kernel: conditioning points too close for the kernel to "
        "separate");

  Eigen::MatrixXd c(n, l);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < l; ++a)
      c(i, a) = dk.kernel_fn(dk.grid.nodes[i], q[a]);

  // T T^T form keeps the downdated matrix symmetric to the last bit
  Eigen::MatrixXd half =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();
  Eigen::MatrixXd t = c * half;
  for (int i = 0; i < n; ++i) t.row(i) *= std::sqrt(dk.grid.weights[i]);
  Eigen::MatrixXd m = dk.matrix - t * t.transpose();

  auto base = dk.kernel_fn;
  auto fn = [base, q, half](double x, double y) {
    const int l = static_cast<int>(q.size());
    Eigen::RowVectorXd cx(l), cy(l);
    for (int a = 0; a < l; ++a) {
      cx(a) = base(x, q[a]);
      cy(a) = base(y, q[a]);
    }
    return base(x, y) - (cx * half).dot(cy * half);
  };
  return discretize_matrix(dk.grid, std::move(m), fn);
}

double psi_bar_trunc(const PalmCondition& pc, const Configuration& x, double r,
                     double eps, double c) {
  pc.validate();
  if (!(c > 0)) throw ConfigError("psi_bar_trunc: normalizer must be positive");
  if (!(r > 0)) throw ConfigError("psi_bar_trunc: cutoff radius must be positive");
  if (!(eps > 0)) throw ConfigError("psi_bar_trunc: exclusion radius must be positive");
  return c * unnorm(pc, x, r, eps);
}

FunctionalEstimate estimate_normalizer(const PalmCondition& pc, double r,
                                       double eps,
                                       const DiscretizedKernel& palm_dk,
                                       int n_samples, std::uint64_t seed,
                                       std::uint64_t stream_offset,
                                       int threads) {
  pc.validate();
  if (!(r > 0) || !(eps > 0))
    throw ConfigError("estimate_normalizer: cutoffs must be positive");
  if (n_samples < 2)
    throw ConfigError("estimate_normalizer: need at least two samples");

  auto draws = sample_many(palm_dk, seed, n_samples, stream_offset, threads);
  McAccumulator acc;
  for (const auto& x : draws) acc.add(unnorm(pc, x, r, eps));
  const auto s = acc.summary();
  if (!(s.mean > 0) || !std::isfinite(s.mean))
    throw DegenerateEstimateError(
        "estimate_normalizer: unnormalized mean vanished or diverged");

  FunctionalEstimate e;
  e.value = 1.0 / s.mean;
  e.std_error = s.std_error / (s.mean * s.mean);
  e.n_samples = n_samples;
  e.r = r;
  e.eps = eps;
  return e;
}

double normalizer_exact(const PalmCondition& pc, double r, double eps,
                        const DiscretizedKernel& palm_dk) {
  pc.validate();
  if (!(r > 0) || !(eps > 0))
    throw ConfigError("normalizer_exact: cutoffs must be positive");
  std::vector<double> g(palm_dk.size(), 1.0);
  for (int i = 0; i < palm_dk.size(); ++i) {
    const double x = palm_dk.grid.nodes[i];
    if (std::abs(x) > r) continue;
    if (min_gap(pc.q, x) < std::max(eps, kNodeGuard)) continue;
    g[i] = product_factor(pc, x);
  }
  const double mean = fredholm_functional(palm_dk, g);
  if (!(mean > 0) || !std::isfinite(mean))
    throw DegenerateEstimateError(
        "normalizer_exact: determinant vanished or diverged");
  return 1.0 / mean;
}

PsiBarLimit psi_bar_limit(const PalmCondition& pc, const Configuration& x,
                          const std::vector<ScheduleStep>& schedule,
                          const DiscretizedKernel& palm_dk, int n_samples,
                          std::uint64_t seed, int threads) {
  pc.validate();
  if (schedule.empty()) throw ConfigError("psi_bar_limit: empty schedule");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (!(schedule[k].r > 0) || !(schedule[k].eps > 0))
      throw ConfigError("psi_bar_limit: cutoffs must be positive");
    if (k > 0 && (schedule[k].r < schedule[k - 1].r ||
                  schedule[k].eps > schedule[k - 1].eps))
      throw ConfigError(
          "psi_bar_limit: schedule must widen the window and shrink the "
          "exclusion");
  }
  if (n_samples < 2)
    throw ConfigError("psi_bar_limit: need at least two samples");

  // one batch serves every step so the step-to-step differences are not
  // dominated by independent sampling noise
  auto draws = sample_many(palm_dk, seed, n_samples, 0, threads);

  PsiBarLimit out;
  for (const auto& step : schedule) {
    McAccumulator acc;
    for (const auto& d : draws) acc.add(unnorm(pc, d, step.r, step.eps));
    const auto s = acc.summary();
    if (!(s.mean > 0) || !std::isfinite(s.mean))
      throw DegenerateEstimateError(
          "psi_bar_limit: unnormalized mean vanished or diverged");
    const double c = 1.0 / s.mean;
    const double c_se = s.std_error / (s.mean * s.mean);
    const double u = unnorm(pc, x, step.r, step.eps);
    FunctionalEstimate e;
    e.value = c * u;
    e.std_error = u * c_se;
    e.n_samples = n_samples;
    e.r = step.r;
    e.eps = step.eps;
    out.steps.push_back(e);
  }

  const std::size_t need = std::min<std::size_t>(3, out.steps.size() - 1);
  out.stabilized = true;
  for (std::size_t k = out.steps.size() - need; k < out.steps.size(); ++k) {
    const double diff = std::abs(out.steps[k].value - out.steps[k - 1].value);
    const double tol = std::max(2.0 * out.steps[k].std_error, 1e-3);
    if (diff >= tol) out.stabilized = false;
  }
  out.final_estimate = out.steps.back();
  return out;
}

PalmCheckReport palm_rn_check(const PalmCondition& pc,
                              const DiscretizedKernel& dk, int n_samples,
                              std::uint64_t seed, double probe_lo,
                              double probe_hi, int threads) {
  pc.validate();
  if (n_samples < 2)
    throw ConfigError("palm_rn_check: need at least two samples");
  if (!(probe_lo < probe_hi))
    throw ConfigError("palm_rn_check: empty probe interval");

  auto palm_q = palm_kernel(dk, pc.q);
  auto palm_p = palm_kernel(dk, pc.p);
  const double r = std::max(std::abs(dk.grid.lo), std::abs(dk.grid.hi));
  const double eps = 1e-6;

  const auto n = static_cast<std::uint64_t>(n_samples);
  const auto c_est = estimate_normalizer(pc, r, eps, palm_q, n_samples, seed,
                                         0 * n, threads);

  PalmCheckReport rep;
  rep.probe_lo = probe_lo;
  rep.probe_hi = probe_hi;
  rep.r = r;
  rep.eps = eps;
  rep.n_samples = n_samples;

  {
    auto draws = sample_many(palm_q, seed, n_samples, 1 * n, threads);
    McAccumulator acc;
    for (const auto& x : draws) acc.add(unnorm(pc, x, r, eps));
    const auto pm = scaled_mean(c_est.value, c_est.std_error, acc.summary());
    McSummary lhs;
    lhs.mean = pm.value;
    lhs.std_error = pm.se;
    lhs.variance = pm.se * pm.se * n_samples;
    lhs.n = n_samples;
    rep.normalization = verdict(lhs, 1.0, 3.0);
  }

  {
    // shared streams pair the two sides: with p = q the draws coincide and
    // the discrepancy is exactly zero; in general positive coupling only
    // tightens the comparison the combined-SE rule grades conservatively
    auto direct = sample_many(palm_p, seed, n_samples, 2 * n, threads);
    McAccumulator acc_s;
    for (const auto& x : direct)
      acc_s.add(static_cast<double>(count_in(x, probe_lo, probe_hi)));

    auto weighted = sample_many(palm_q, seed, n_samples, 2 * n, threads);
    McAccumulator acc_su;
    for (const auto& x : weighted)
      acc_su.add(static_cast<double>(count_in(x, probe_lo, probe_hi)) *
                 unnorm(pc, x, r, eps));
    const auto pm =
        scaled_mean(c_est.value, c_est.std_error, acc_su.summary());
    McSummary rhs;
    rhs.mean = pm.value;
    rhs.std_error = pm.se;
    rhs.variance = pm.se * pm.se * n_samples;
    rhs.n = n_samples;
    rep.transfer = verdict(acc_s.summary(), rhs, 3.0);
  }

  rep.pass = rep.normalization.pass && rep.transfer.pass;
  return rep;
}

}  // namespace dbdpp
