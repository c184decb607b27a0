#pragma once

#include <vector>

namespace dbdpp {

// Nodes and positive weights for integration over [lo, hi].  Weights sum to
// the window length; nodes are strictly increasing and interior.
struct QuadratureGrid {
  double lo = 0;
  double hi = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

// Gauss-Legendre rule with n points on [-1, 1], nodes ascending.
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

// Composite Gauss-Legendre grid with n_nodes points total, split into
// equal-width panels of at most 16 points each.
QuadratureGrid build_grid(double lo, double hi, int n_nodes);

// Symmetric grid on [-half_range, half_range] with dyadically widening
// panels away from the origin: [0,1], [1,2], [2,4], ... mirrored.  Captures
// heavy 1/x^2 tails with a node count logarithmic in half_range.
QuadratureGrid build_graded_grid(double half_range, int panel_order = 16);

// Integral of f over the grid's window using its nodes and weights.
template <class F>
double integrate(const QuadratureGrid& g, F&& f) {
  double acc = 0;
  for (int i = 0; i < g.size(); ++i) acc += g.weights[i] * f(g.nodes[i]);
  return acc;
}

}  // namespace dbdpp
