#include "dbdpp/discretize.hpp"

#include <cmath>

#include "dbdpp/errors.hpp"

namespace dbdpp {

namespace {

// eigenvalues of the weighted section must look like a projection seen
// through quadrature noise; anything further out signals under-resolution
constexpr double kEigenSlack = 1e-6;

void validate_and_decompose(DiscretizedKernel& dk) {
  const int n = dk.size();
  if (n == 0) throw ConfigError("discretize: empty grid");
  if (dk.matrix.rows() != n || dk.matrix.cols() != n)
    throw ConfigError("discretize: matrix does not match the grid");
  const double scale = 1.0 + dk.matrix.cwiseAbs().maxCoeff();
  if ((dk.matrix - dk.matrix.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * scale)
    throw NumericalError("discretize: matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dk.matrix);
  if (es.info() != Eigen::Success)
    throw NumericalError("discretize: eigendecomposition failed");
  dk.eigenvalues = es.eigenvalues();
  dk.eigenvectors = es.eigenvectors();

  for (int i = 0; i < n; ++i) {
    const double l = dk.eigenvalues[i];
    if (l < -kEigenSlack || l > 1.0 + kEigenSlack)
      throw EigenvalueRangeError(
          "discretize: eigenvalue outside [0,1] beyond quadrature slack "
          "(grid does not resolve the kernel)");
    dk.eigenvalues[i] = std::clamp(l, 0.0, 1.0);
  }

  const double ortho = (dk.eigenvectors.transpose() * dk.eigenvectors -
                        Eigen::MatrixXd::Identity(n, n))
                           .cwiseAbs()
                           .maxCoeff();
  if (ortho > 1e-8)
    throw NumericalError("discretize: eigenvectors lost orthonormality");
}

}  // namespace

DiscretizedKernel discretize(const DeBrangesFunction& f, QuadratureGrid grid) {
  const int n = static_cast<int>(grid.nodes.size());
  if (n == 0) throw ConfigError("discretize: empty grid");
  DiscretizedKernel dk;
  dk.grid = std::move(grid);
  dk.matrix.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = std::sqrt(dk.grid.weights[i] * dk.grid.weights[j]) *
                       f.kernel_value(dk.grid.nodes[i], dk.grid.nodes[j]);
      dk.matrix(i, j) = v;
      dk.matrix(j, i) = v;
    }
  }
  dk.kernel_fn = [f](double x, double y) { return f.kernel_value(x, y); };
  validate_and_decompose(dk);
  return dk;
}

DiscretizedKernel discretize_matrix(QuadratureGrid grid, Eigen::MatrixXd m,
                                    std::function<double(double, double)> k) {
  DiscretizedKernel dk;
  dk.grid = std::move(grid);
  dk.matrix = std::move(m);
  dk.kernel_fn = std::move(k);
  validate_and_decompose(dk);
  return dk;
}

double fredholm_functional(const DiscretizedKernel& dk,
                           const std::vector<double>& g_values) {
  const int n = dk.size();
  if (static_cast<int>(g_values.size()) != n)
    throw ConfigError("fredholm_functional: g must be sampled on the grid");
  for (double g : g_values)
    if (!std::isfinite(g))
      throw ConfigError("fredholm_functional: g values must be finite");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    m.row(i) += (g_values[i] - 1.0) * dk.matrix.row(i);
  return Eigen::PartialPivLU<Eigen::MatrixXd>(m).determinant();
}

std::pair<double, double> expected_count_and_variance(
    const DiscretizedKernel& dk) {
  double mean = 0, var = 0;
  for (int i = 0; i < dk.size(); ++i) {
    const double l = dk.eigenvalues[i];
    mean += l;
    var += l * (1.0 - l);
  }
  return {mean, var};
}

}  // namespace dbdpp
