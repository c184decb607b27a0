#include "dbdpp/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "dbdpp/errors.hpp"
#include "dbdpp/rng.hpp"

namespace dbdpp {

Configuration sample_at(const DiscretizedKernel& dk, std::uint64_t seed,
                        std::uint64_t stream) {
  const int n = dk.size();
  CounterRng rng(seed, stream);

  // Bernoulli thinning of the eigenbasis, ascending index order so the
  // draw sequence is part of the contract
  std::vector<int> picked;
  for (int i = 0; i < n; ++i)
    if (rng.uniform01() < dk.eigenvalues[i]) picked.push_back(i);
  const int k = static_cast<int>(picked.size());
  Configuration out;
  if (k == 0) return out;

  // rows of V are the feature vectors of the nodes in the selected
  // projection; d holds the residual diagonal of V V^T
  Eigen::MatrixXd v(n, k);
  for (int t = 0; t < k; ++t) v.col(t) = dk.eigenvectors.col(picked[t]);
  std::vector<double> d(n);
  for (int j = 0; j < n; ++j) d[j] = v.row(j).squaredNorm();

  Eigen::MatrixXd basis(k, k);  // orthonormal rows span the chosen features
  Eigen::VectorXd e(k);
  out.points.reserve(k);
  for (int t = 0; t < k; ++t) {
    double total = 0;
    for (int j = 0; j < n; ++j) total += d[j];
    if (!(total > 0))
      throw NumericalError("sample: residual mass vanished mid-draw");
    const double u = rng.uniform01() * total;
    int jstar = -1;
    double cum = 0;
    for (int j = 0; j < n; ++j) {
      cum += d[j];
      if (u < cum) {
        jstar = j;
        break;
      }
    }
    if (jstar < 0) {  // walked off the end on rounding: last positive cell
      for (int j = n - 1; j >= 0; --j)
        if (d[j] > 0) {
          jstar = j;
          break;
        }
    }
    if (jstar < 0)
      throw NumericalError("sample: no admissible node in categorical draw");
    out.points.push_back(dk.grid.nodes[jstar]);

    e = v.row(jstar).transpose();
    for (int pass = 0; pass < 2; ++pass)
      for (int s = 0; s < t; ++s) e -= basis.row(s).dot(e) * basis.row(s).transpose();
    const double norm = e.norm();
    if (!(norm > 0))
      throw NumericalError("sample: degenerate direction in orthogonalization");
    basis.row(t) = e.transpose() / norm;

    for (int j = 0; j < n; ++j) {
      const double proj = basis.row(t).dot(v.row(j));
      d[j] = std::max(0.0, d[j] - proj * proj);
    }
    d[jstar] = 0;
  }

  std::sort(out.points.begin(), out.points.end());
  return out;
}

Configuration sample(const DiscretizedKernel& dk, std::uint64_t seed) {
  return sample_at(dk, seed, 0);
}

std::vector<Configuration> sample_many(const DiscretizedKernel& dk,
                                       std::uint64_t seed, int n,
                                       std::uint64_t stream_offset,
                                       int threads) {
  if (n < 0) throw ConfigError("sample_many: negative sample count");
  if (threads < 1) throw ConfigError("sample_many: need at least one thread");
  std::vector<Configuration> out(n);
  if (n == 0) return out;
  threads = std::min(threads, n);

  auto worker = [&](int w) {
    for (int i = w; i < n; i += threads)
      out[i] = sample_at(dk, seed, stream_offset + static_cast<std::uint64_t>(i));
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace dbdpp
