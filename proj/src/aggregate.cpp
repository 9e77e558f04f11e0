#include "sgla/aggregate.hpp"

#include <algorithm>
#include <string>

#include "sgla/errors.hpp"
#include "sgla/kernels.hpp"

namespace sgla {

LaplacianAggregator::LaplacianAggregator(std::span<const ViewLaplacian> views) {
  if (views.empty()) throw InvalidArgument("aggregation needs at least one view");
  n_ = views.front().size();
  for (const auto& v : views) {
    if (v.size() != n_) {
      throw DimensionMismatch("view Laplacians disagree on n (" + std::to_string(v.size()) +
                              " vs " + std::to_string(n_) + ")");
    }
  }

  row_ptr_.assign(static_cast<std::size_t>(n_) + 1, 0);
  std::vector<Index> merged;
  for (Index r = 0; r < n_; ++r) {
    merged.clear();
    for (const auto& v : views) {
      auto cols = v.matrix.row_cols(r);
      merged.insert(merged.end(), cols.begin(), cols.end());
    }
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    col_.insert(col_.end(), merged.begin(), merged.end());
    row_ptr_[r + 1] = static_cast<std::int64_t>(col_.size());
  }

  aligned_.assign(views.size(), std::vector<double>(col_.size(), 0.0));
  for (std::size_t i = 0; i < views.size(); ++i) {
    const auto& m = views[i].matrix;
    for (Index r = 0; r < n_; ++r) {
      auto cols = m.row_cols(r);
      auto vals = m.row_values(r);
      std::int64_t pos = row_ptr_[r];
      for (std::size_t j = 0; j < cols.size(); ++j) {
        while (col_[pos] != cols[j]) ++pos;
        aligned_[i][pos] = vals[j];
      }
    }
  }
}

SparseSymMatrix LaplacianAggregator::aggregate(std::span<const double> w) const {
  if (w.size() != aligned_.size()) {
    throw DimensionMismatch("weight vector has " + std::to_string(w.size()) + " entries for " +
                            std::to_string(aligned_.size()) + " views");
  }
  std::vector<double> values(col_.size());
  kernels::weighted_sum(aligned_, w, values);
  return SparseSymMatrix(n_, row_ptr_, col_, std::move(values));
}

SparseSymMatrix aggregate(std::span<const ViewLaplacian> views, std::span<const double> w) {
  return LaplacianAggregator(views).aggregate(w);
}

}  // namespace sgla
