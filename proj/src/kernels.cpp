#include "sgla/kernels.hpp"

#include <algorithm>
#include <numeric>

#include "sgla/errors.hpp"
#include "sgla/parallel.hpp"

namespace sgla::kernels {
namespace {

inline double row_dot(const SparseSymMatrix& a, std::span<const double> x, Index r) {
  auto cols = a.row_cols(r);
  auto vals = a.row_values(r);
  double acc = 0.0;
  for (std::size_t i = 0; i < cols.size(); ++i) acc += vals[i] * x[cols[i]];
  return acc;
}

void check_spmv(const SparseSymMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != static_cast<std::size_t>(a.size()) || y.size() != x.size()) {
    throw DimensionMismatch("spmv: vector length does not match matrix");
  }
}

// Top-k selection for one row; scratch holds candidate indices.
void topk_row(std::span<const double> unit_rows, Index n, Index d, Index k, Index a,
              std::vector<Index>& scratch, std::vector<double>& sims, Index* out_idx,
              double* out_sim) {
  const double* xa = unit_rows.data() + static_cast<std::size_t>(a) * d;
  scratch.clear();
  for (Index b = 0; b < n; ++b) {
    if (b == a) continue;
    const double* xb = unit_rows.data() + static_cast<std::size_t>(b) * d;
    double s = 0.0;
    for (Index j = 0; j < d; ++j) s += xa[j] * xb[j];
    sims[b] = s;
    if (s > 0.0) scratch.push_back(b);
  }
  auto better = [&](Index p, Index q) { return sims[p] != sims[q] ? sims[p] > sims[q] : p < q; };
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(k), scratch.size());
  std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(take),
                    scratch.end(), better);
  for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
    if (i < take) {
      out_idx[i] = scratch[i];
      out_sim[i] = sims[scratch[i]];
    } else {
      out_idx[i] = -1;
      out_sim[i] = 0.0;
    }
  }
}

TopK make_topk(Index n, Index k) {
  TopK t;
  t.neighbors.assign(static_cast<std::size_t>(n) * k, -1);
  t.sims.assign(static_cast<std::size_t>(n) * k, 0.0);
  return t;
}

}  // namespace

void spmv_serial(const SparseSymMatrix& a, std::span<const double> x, std::span<double> y) {
  check_spmv(a, x, y);
  for (Index r = 0; r < a.size(); ++r) y[r] = row_dot(a, x, r);
}

void spmv_omp(const SparseSymMatrix& a, std::span<const double> x, std::span<double> y) {
  check_spmv(a, x, y);
  const Index n = a.size();
#pragma omp parallel for schedule(static) num_threads(parallel::thread_count())
  for (Index r = 0; r < n; ++r) y[r] = row_dot(a, x, r);
}

void spmv(const SparseSymMatrix& a, std::span<const double> x, std::span<double> y) {
  if (parallel::serial() || a.nnz() < 20000) {
    spmv_serial(a, x, y);
  } else {
    spmv_omp(a, x, y);
  }
}

void weighted_sum_serial(std::span<const std::vector<double>> aligned, std::span<const double> w,
                         std::span<double> out) {
  if (aligned.size() != w.size()) throw DimensionMismatch("weighted_sum: weight count");
  for (std::size_t e = 0; e < out.size(); ++e) {
    double acc = 0.0;
    for (std::size_t i = 0; i < aligned.size(); ++i) acc += w[i] * aligned[i][e];
    out[e] = acc;
  }
}

void weighted_sum_omp(std::span<const std::vector<double>> aligned, std::span<const double> w,
                      std::span<double> out) {
  if (aligned.size() != w.size()) throw DimensionMismatch("weighted_sum: weight count");
  const auto m = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static) num_threads(parallel::thread_count())
  for (std::int64_t e = 0; e < m; ++e) {
    double acc = 0.0;
    for (std::size_t i = 0; i < aligned.size(); ++i) acc += w[i] * aligned[i][e];
    out[e] = acc;
  }
}

void weighted_sum(std::span<const std::vector<double>> aligned, std::span<const double> w,
                  std::span<double> out) {
  if (parallel::serial() || out.size() < 50000) {
    weighted_sum_serial(aligned, w, out);
  } else {
    weighted_sum_omp(aligned, w, out);
  }
}

TopK cosine_topk_serial(std::span<const double> unit_rows, Index n, Index d, Index k) {
  TopK t = make_topk(n, k);
  std::vector<Index> scratch;
  std::vector<double> sims(static_cast<std::size_t>(n));
  for (Index a = 0; a < n; ++a) {
    topk_row(unit_rows, n, d, k, a, scratch, sims, t.neighbors.data() + static_cast<std::size_t>(a) * k,
             t.sims.data() + static_cast<std::size_t>(a) * k);
  }
  return t;
}

TopK cosine_topk_omp(std::span<const double> unit_rows, Index n, Index d, Index k) {
  TopK t = make_topk(n, k);
#pragma omp parallel num_threads(parallel::thread_count())
  {
    std::vector<Index> scratch;
    std::vector<double> sims(static_cast<std::size_t>(n));
#pragma omp for schedule(dynamic, 16)
    for (Index a = 0; a < n; ++a) {
      topk_row(unit_rows, n, d, k, a, scratch, sims,
               t.neighbors.data() + static_cast<std::size_t>(a) * k,
               t.sims.data() + static_cast<std::size_t>(a) * k);
    }
  }
  return t;
}

TopK cosine_topk(std::span<const double> unit_rows, Index n, Index d, Index k) {
  if (parallel::serial() || n < 256) return cosine_topk_serial(unit_rows, n, d, k);
  return cosine_topk_omp(unit_rows, n, d, k);
}

}  // namespace sgla::kernels
