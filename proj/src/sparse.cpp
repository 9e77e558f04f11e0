#include "sgla/sparse.hpp"

#include <algorithm>
#include <string>

#include "sgla/errors.hpp"

namespace sgla {

SparseSymMatrix::SparseSymMatrix(Index n, std::vector<std::int64_t> row_ptr, std::vector<Index> col,
                                 std::vector<double> values)
    : n_(n), row_ptr_(std::move(row_ptr)), col_(std::move(col)), values_(std::move(values)) {
  validate();
}

void SparseSymMatrix::validate() const {
  if (n_ < 0) throw InvalidArgument("negative matrix dimension");
  if (row_ptr_.size() != static_cast<std::size_t>(n_) + 1 || row_ptr_.front() != 0 ||
      row_ptr_.back() != static_cast<std::int64_t>(col_.size()) || col_.size() != values_.size()) {
    throw InvalidArgument("inconsistent CSR arrays");
  }
  for (Index r = 0; r < n_; ++r) {
    if (row_ptr_[r + 1] < row_ptr_[r]) throw InvalidArgument("row offsets not monotone");
    auto cols = row_cols(r);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (cols[i] < 0 || cols[i] >= n_) throw InvalidArgument("column index out of range");
      if (i > 0 && cols[i] <= cols[i - 1]) {
        throw InvalidArgument("column indices not strictly increasing in row " + std::to_string(r));
      }
    }
  }
  for (Index r = 0; r < n_; ++r) {
    auto cols = row_cols(r);
    auto vals = row_values(r);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      Index c = cols[i];
      if (c <= r) continue;
      auto other = row_cols(c);
      auto it = std::lower_bound(other.begin(), other.end(), r);
      if (it == other.end() || *it != r) {
        throw InvalidArgument("pattern not symmetric at (" + std::to_string(r) + "," +
                              std::to_string(c) + ")");
      }
      double mirrored = row_values(c)[static_cast<std::size_t>(it - other.begin())];
      if (!(mirrored == vals[i]) && !(mirrored != mirrored && vals[i] != vals[i])) {
        throw InvalidArgument("values not symmetric at (" + std::to_string(r) + "," +
                              std::to_string(c) + ")");
      }
    }
  }
}

SparseSymMatrix SparseSymMatrix::from_triplets(Index n, std::vector<Triplet> entries) {
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::int64_t> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Index> col;
  std::vector<double> val;
  col.reserve(entries.size());
  val.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n) {
      throw InvalidArgument("triplet index out of range");
    }
    if (i > 0 && entries[i - 1].row == e.row && entries[i - 1].col == e.col) {
      throw InvalidArgument("duplicate triplet");
    }
    ++row_ptr[static_cast<std::size_t>(e.row) + 1];
    col.push_back(e.col);
    val.push_back(e.value);
  }
  for (Index r = 0; r < n; ++r) row_ptr[r + 1] += row_ptr[r];
  return SparseSymMatrix(n, std::move(row_ptr), std::move(col), std::move(val));
}

SparseSymMatrix SparseSymMatrix::identity(Index n) {
  std::vector<std::int64_t> row_ptr(static_cast<std::size_t>(n) + 1);
  std::vector<Index> col(static_cast<std::size_t>(n));
  for (Index i = 0; i <= n; ++i) row_ptr[i] = i;
  for (Index i = 0; i < n; ++i) col[i] = i;
  return SparseSymMatrix(n, std::move(row_ptr), std::move(col),
                         std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

double SparseSymMatrix::at(Index r, Index c) const {
  auto cols = row_cols(r);
  auto it = std::lower_bound(cols.begin(), cols.end(), c);
  if (it == cols.end() || *it != c) return 0.0;
  return row_values(r)[static_cast<std::size_t>(it - cols.begin())];
}

bool SparseSymMatrix::has_entry(Index r, Index c) const {
  auto cols = row_cols(r);
  return std::binary_search(cols.begin(), cols.end(), c);
}

bool SparseSymMatrix::same_pattern(const SparseSymMatrix& other) const {
  return n_ == other.n_ && row_ptr_ == other.row_ptr_ && col_ == other.col_;
}

}  // namespace sgla
