#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "sgla/eigensolver.hpp"
#include "sgla/sparse.hpp"

namespace sgla {

struct ClusterAssignment {
  std::vector<int> labels;
  int k = 0;
};

struct KMeansOptions {
  int restarts = 10;
  int max_iter = 300;
  std::uint64_t seed = 42;
};

struct KMeansResult {
  std::vector<int> labels;
  Eigen::MatrixXd centroids;  // k x d
  double inertia = 0.0;
};

// Lloyd iterations from k-means++ seeds; the restart with the lowest inertia
// wins. Empty clusters are reseeded at the point farthest from its centroid.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, const KMeansOptions& opts = {});

// Bottom-k eigenvectors, rows scaled to unit length, then k-means.
ClusterAssignment spectral_clustering(const SparseSymMatrix& laplacian, int k,
                                      std::uint64_t seed = 42, const EigenOptions& eig = {});

// Eigenvectors of the d smallest eigenvalues after the first one (n x d).
Eigen::MatrixXd spectral_embedding(const SparseSymMatrix& laplacian, int d,
                                   std::uint64_t seed = 42, const EigenOptions& eig = {});

}  // namespace sgla
