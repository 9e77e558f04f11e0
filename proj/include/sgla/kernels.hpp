#pragma once

#include <span>
#include <vector>

#include "sgla/sparse.hpp"

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP version; the dispatching entry points pick one based on
// sgla::parallel. Each output element is reduced in a fixed order in both
// versions, so serial and parallel results are bit-identical.
namespace sgla::kernels {

// y = A x
void spmv_serial(const SparseSymMatrix& a, std::span<const double> x, std::span<double> y);
void spmv_omp(const SparseSymMatrix& a, std::span<const double> x, std::span<double> y);
void spmv(const SparseSymMatrix& a, std::span<const double> x, std::span<double> y);

// out[e] = sum_i w[i] * aligned[i][e], accumulated in view order.
void weighted_sum_serial(std::span<const std::vector<double>> aligned, std::span<const double> w,
                         std::span<double> out);
void weighted_sum_omp(std::span<const std::vector<double>> aligned, std::span<const double> w,
                      std::span<double> out);
void weighted_sum(std::span<const std::vector<double>> aligned, std::span<const double> w,
                  std::span<double> out);

// For row-major unit-norm rows, the K most similar other rows of every row
// by dot product (descending similarity, lower index on ties). Rows with
// non-positive similarity are not reported. neighbors/sims are n*K, padded
// with -1 / 0 where fewer than K positive neighbors exist.
struct TopK {
  std::vector<Index> neighbors;
  std::vector<double> sims;
};
TopK cosine_topk_serial(std::span<const double> unit_rows, Index n, Index d, Index k);
TopK cosine_topk_omp(std::span<const double> unit_rows, Index n, Index d, Index k);
TopK cosine_topk(std::span<const double> unit_rows, Index n, Index d, Index k);

}  // namespace sgla::kernels
