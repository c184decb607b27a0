#include "dbdpp/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "dbdpp/errors.hpp"

namespace dbdpp {

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (n < 1) throw ConfigError("gauss_legendre: need at least one node");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // k-th root counted from +1; Tricomi initial guess then Newton on P_n.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 64; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int j = 1; j < n; ++j) {
        const double p2 = ((2 * j + 1) * z * p1 - j * p0) / (j + 1);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    nodes[n - 1 - i] = z;
    nodes[i] = -z;
    weights[n - 1 - i] = w;
    weights[i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

namespace {

void append_panel(QuadratureGrid& g, double a, double b, int order) {
  std::vector<double> x, w;
  gauss_legendre(order, x, w);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < order; ++i) {
    g.nodes.push_back(mid + half * x[i]);
    g.weights.push_back(half * w[i]);
  }
}

}  // namespace

QuadratureGrid build_grid(double lo, double hi, int n_nodes) {
  if (!(hi > lo)) throw ConfigError("build_grid: window must have hi > lo");
  if (n_nodes < 1) throw ConfigError("build_grid: need at least one node");
  QuadratureGrid g;
  g.lo = lo;
  g.hi = hi;
  const int panels = (n_nodes + 15) / 16;
  const int base = n_nodes / panels;
  const int extra = n_nodes % panels;
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const int order = base + (p < extra ? 1 : 0);
    append_panel(g, lo + p * width, lo + (p + 1) * width, order);
  }
  return g;
}

QuadratureGrid build_graded_grid(double half_range, int panel_order) {
  if (!(half_range > 0)) throw ConfigError("build_graded_grid: half_range must be positive");
  if (panel_order < 2) throw ConfigError("build_graded_grid: panel order too small");
  std::vector<double> edges{0.0};
  double e = 1.0;
  while (e < half_range) {
    edges.push_back(e);
    e *= 2.0;
  }
  edges.push_back(half_range);

  QuadratureGrid g;
  g.lo = -half_range;
  g.hi = half_range;
  for (std::size_t i = edges.size() - 1; i > 0; --i)
    append_panel(g, -edges[i], -edges[i - 1], panel_order);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    append_panel(g, edges[i], edges[i + 1], panel_order);
  return g;
}

}  // namespace dbdpp
