#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "sgla/sparse.hpp"

namespace sgla {

// The t smallest eigenvalues of a matrix, ascending, with the residual
// norm ||Mv - lambda v|| of each Ritz pair.
struct SpectrumSlice {
  std::vector<double> values;
  std::vector<double> residuals;
  std::size_t matvecs = 0;

  std::size_t size() const { return values.size(); }
  // 1-based accessor matching the usual lambda_1 <= lambda_2 <= ... naming.
  double lambda(std::size_t i) const { return values.at(i - 1); }
};

struct EigenPairs {
  SpectrumSlice spectrum;
  Eigen::MatrixXd vectors;  // n x t, orthonormal columns
};

struct EigenOptions {
  double tol = 1e-8;
  std::uint64_t seed = 42;
  // 0 selects max(10 n, 1000).
  std::size_t max_matvecs = 0;
};

// Values within this distance of zero are reported as exactly 0.
inline constexpr double kZeroClamp = 1e-10;

// Smallest eigenpairs of a symmetric matrix whose spectrum lies in [0, 2]
// (any convex combination of normalized Laplacians). Runs a restarted block
// Krylov iteration with full reorthogonalization on 2I - M, whose largest
// eigenvalues are the wanted ones, and maps back with lambda = 2 - mu.
// Block size equals t, so eigenvalues repeated up to t times are resolved.
// Throws NoConvergence when the residuals are not all below tol within the
// matvec cap.
SpectrumSlice smallest_eigenvalues(const SparseSymMatrix& m, std::size_t t,
                                   const EigenOptions& opts = {});

// As smallest_eigenvalues, plus eigenvectors whose largest-magnitude entry
// is positive.
EigenPairs smallest_eigenvectors(const SparseSymMatrix& m, std::size_t t,
                                 const EigenOptions& opts = {});

}  // namespace sgla
