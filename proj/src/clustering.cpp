#include "sgla/clustering.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "sgla/errors.hpp"

namespace sgla {
namespace {

double squared_distance(const Eigen::MatrixXd& points, Eigen::Index i, const Eigen::MatrixXd& c,
                        Eigen::Index j) {
  return (points.row(i) - c.row(j)).squaredNorm();
}

// k-means++ seeding: first centre uniform, then proportional to D^2.
Eigen::MatrixXd seed_centroids(const Eigen::MatrixXd& points, int k, std::mt19937_64& rng) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd c(k, points.cols());
  std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
  c.row(0) = points.row(first(rng));
  std::vector<double> d2(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  for (int j = 1; j < k; ++j) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points, i, c, j - 1));
      total += d2[i];
    }
    Eigen::Index pick = n - 1;
    if (total > 0.0) {
      double u = std::uniform_real_distribution<double>(0.0, total)(rng);
      for (Eigen::Index i = 0; i < n; ++i) {
        u -= d2[i];
        if (u < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = first(rng);
    }
    c.row(j) = points.row(pick);
  }
  return c;
}

double assign(const Eigen::MatrixXd& points, const Eigen::MatrixXd& c, std::vector<int>& labels) {
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    int best = 0;
    double best_d = squared_distance(points, i, c, 0);
    for (Eigen::Index j = 1; j < c.rows(); ++j) {
      const double d = squared_distance(points, i, c, j);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(j);
      }
    }
    labels[i] = best;
    inertia += best_d;
  }
  return inertia;
}

KMeansResult lloyd(const Eigen::MatrixXd& points, int k, int max_iter, std::mt19937_64& rng) {
  const Eigen::Index n = points.rows();
  KMeansResult res;
  res.centroids = seed_centroids(points, k, rng);
  res.labels.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> prev;
  for (int it = 0; it < max_iter; ++it) {
    res.inertia = assign(points, res.centroids, res.labels);
    if (res.labels == prev) break;
    prev = res.labels;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(res.labels[i]) += points.row(i);
      ++counts[res.labels[i]];
    }
    for (int j = 0; j < k; ++j) {
      if (counts[j] > 0) {
        res.centroids.row(j) = sums.row(j) / static_cast<double>(counts[j]);
        continue;
      }
      // Empty cluster: move it onto the point worst served by its centroid.
      Eigen::Index far = 0;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d = squared_distance(points, i, res.centroids, res.labels[i]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      res.centroids.row(j) = points.row(far);
      res.labels[far] = j;
    }
  }
  res.inertia = assign(points, res.centroids, res.labels);
  return res;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, const KMeansOptions& opts) {
  if (k < 1) throw InvalidArgument("k-means needs k >= 1");
  if (points.rows() < k) {
    throw InvalidArgument("k-means with k=" + std::to_string(k) + " on " +
                          std::to_string(points.rows()) + " points");
  }
  if (opts.restarts < 1 || opts.max_iter < 1) throw InvalidArgument("k-means options must be >= 1");
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < opts.restarts; ++r) {
    std::seed_seq seq{opts.seed, static_cast<std::uint64_t>(r)};
    std::mt19937_64 rng(seq);
    KMeansResult cur = lloyd(points, k, opts.max_iter, rng);
    if (cur.inertia < best.inertia) best = std::move(cur);
  }
  return best;
}

ClusterAssignment spectral_clustering(const SparseSymMatrix& laplacian, int k, std::uint64_t seed,
                                      const EigenOptions& eig) {
  if (k < 1 || k > laplacian.size()) throw InvalidArgument("cluster count out of range");
  EigenOptions eo = eig;
  eo.seed = seed;
  Eigen::MatrixXd u = smallest_eigenvectors(laplacian, static_cast<std::size_t>(k), eo).vectors;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double norm = u.row(i).norm();
    if (norm > 0.0) u.row(i) /= norm;
  }
  KMeansOptions ko;
  ko.seed = seed;
  return {kmeans(u, k, ko).labels, k};
}

Eigen::MatrixXd spectral_embedding(const SparseSymMatrix& laplacian, int d, std::uint64_t seed,
                                   const EigenOptions& eig) {
  if (d < 1 || d >= laplacian.size()) {
    throw InvalidArgument("embedding dimension " + std::to_string(d) + " must lie in [1, n-1] for n=" +
                          std::to_string(laplacian.size()));
  }
  EigenOptions eo = eig;
  eo.seed = seed;
  const EigenPairs p = smallest_eigenvectors(laplacian, static_cast<std::size_t>(d) + 1, eo);
  return p.vectors.rightCols(d);
}

}  // namespace sgla
