#pragma once

#include <span>
#include <vector>

#include "sgla/sparse.hpp"
#include "sgla/views.hpp"

namespace sgla {

// Precomputes the union sparsity pattern of a fixed set of view Laplacians
// so that repeated weighted sums only touch values.
class LaplacianAggregator {
 public:
  explicit LaplacianAggregator(std::span<const ViewLaplacian> views);

  std::size_t view_count() const { return aligned_.size(); }
  Index size() const { return n_; }

  // sum_i w[i] L_i over the union pattern; explicit zeros are kept.
  SparseSymMatrix aggregate(std::span<const double> w) const;

 private:
  Index n_ = 0;
  std::vector<std::int64_t> row_ptr_;
  std::vector<Index> col_;
  std::vector<std::vector<double>> aligned_;  // per view, values on the union pattern
};

// One-shot form of LaplacianAggregator::aggregate.
SparseSymMatrix aggregate(std::span<const ViewLaplacian> views, std::span<const double> w);

}  // namespace sgla
