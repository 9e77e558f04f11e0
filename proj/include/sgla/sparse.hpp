#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sgla {

using Index = std::int32_t;

struct Triplet {
  Index row;
  Index col;
  double value;
};

// Square symmetric matrix in compressed row storage. Both triangles are
// stored so a matvec is a single pass over the rows. Column indices are
// strictly increasing within a row and A[a,b] is bit-identical to A[b,a].
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;

  // Takes ownership of CSR arrays; throws InvalidArgument if the structure
  // or symmetry invariants do not hold.
  SparseSymMatrix(Index n, std::vector<std::int64_t> row_ptr, std::vector<Index> col,
                  std::vector<double> values);

  // Builds from entries that must already describe a symmetric matrix
  // (both (a,b) and (b,a) present with equal values). Duplicates are rejected.
  static SparseSymMatrix from_triplets(Index n, std::vector<Triplet> entries);

  static SparseSymMatrix identity(Index n);

  Index size() const { return n_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(col_.size()); }

  std::span<const std::int64_t> row_ptr() const { return row_ptr_; }
  std::span<const Index> col() const { return col_; }
  std::span<const double> values() const { return values_; }

  std::span<const Index> row_cols(Index r) const {
    return {col_.data() + row_ptr_[r], static_cast<std::size_t>(row_ptr_[r + 1] - row_ptr_[r])};
  }
  std::span<const double> row_values(Index r) const {
    return {values_.data() + row_ptr_[r], static_cast<std::size_t>(row_ptr_[r + 1] - row_ptr_[r])};
  }

  // Stored value at (r, c), 0 when the entry is not in the pattern.
  double at(Index r, Index c) const;
  bool has_entry(Index r, Index c) const;

  bool same_pattern(const SparseSymMatrix& other) const;

  friend bool operator==(const SparseSymMatrix&, const SparseSymMatrix&) = default;

 private:
  void validate() const;

  Index n_ = 0;
  std::vector<std::int64_t> row_ptr_{0};
  std::vector<Index> col_;
  std::vector<double> values_;
};

}  // namespace sgla
