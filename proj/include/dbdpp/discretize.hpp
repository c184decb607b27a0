#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dbdpp/debranges.hpp"
#include "dbdpp/quadrature.hpp"

namespace dbdpp {

// A simple point configuration: strictly increasing positions.
struct Configuration {
  std::vector<double> points;
};

// Weighted finite section of the normalized kernel on a window grid.
// matrix_ij = sqrt(w_i w_j) K(x_i, x_j); eigenvalues ascending, validated
// against [-1e-6, 1+1e-6] and then clipped to [0, 1]; kernel_fn keeps the
// continuum evaluator for off-grid queries (Palm conditioning, RN factors).
struct DiscretizedKernel {
  QuadratureGrid grid;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  std::function<double(double, double)> kernel_fn;

  int size() const { return static_cast<int>(grid.nodes.size()); }
};

DiscretizedKernel discretize(const DeBrangesFunction& f, QuadratureGrid grid);

// Validation + eigendecomposition for an externally assembled weighted
// matrix (Palm kernels, synthetic test kernels).
DiscretizedKernel discretize_matrix(QuadratureGrid grid, Eigen::MatrixXd m,
                                    std::function<double(double, double)> k);

// det(I + D_{g-1} K~): multiplicative statistic E[prod g(x_i)] over the
// window, evaluated by LU factorization.
double fredholm_functional(const DiscretizedKernel& dk,
                           const std::vector<double>& g_values);

// (mean, variance) of the window point count: (sum l_i, sum l_i (1 - l_i)).
std::pair<double, double> expected_count_and_variance(
    const DiscretizedKernel& dk);

}  // namespace dbdpp
