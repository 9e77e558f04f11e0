// Serial reference vs OpenMP kernels on random inputs.
#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <tuple>
#include <random>
#include <vector>

#include "sgla/kernels.hpp"
#include "sgla/sparse.hpp"

namespace {

sgla::SparseSymMatrix random_matrix(sgla::Index n, int per_row) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<sgla::Index> node(0, n - 1);
  std::vector<sgla::Triplet> t;
  for (sgla::Index a = 0; a < n; ++a) {
    for (int e = 0; e < per_row; ++e) {
      const sgla::Index b = node(rng);
      if (b <= a) continue;
      t.push_back({a, b, 1.0});
      t.push_back({b, a, 1.0});
    }
  }
  std::sort(t.begin(), t.end(), [](const auto& x, const auto& y) {
    return std::tie(x.row, x.col) < std::tie(y.row, y.col);
  });
  t.erase(std::unique(t.begin(), t.end(),
                      [](const auto& x, const auto& y) { return x.row == y.row && x.col == y.col; }),
          t.end());
  return sgla::SparseSymMatrix::from_triplets(n, std::move(t));
}

std::vector<double> random_unit_rows(sgla::Index n, sgla::Index d) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  std::vector<double> x(static_cast<std::size_t>(n) * d);
  for (sgla::Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (sgla::Index j = 0; j < d; ++j) s += std::pow(x[i * d + j] = g(rng), 2);
    for (sgla::Index j = 0; j < d; ++j) x[i * d + j] /= std::sqrt(s);
  }
  return x;
}

template <bool Omp>
void BM_Spmv(benchmark::State& state) {
  const auto a = random_matrix(static_cast<sgla::Index>(state.range(0)), 16);
  std::vector<double> x(a.size(), 1.0), y(a.size());
  for (auto _ : state) {
    if constexpr (Omp) {
      sgla::kernels::spmv_omp(a, x, y);
    } else {
      sgla::kernels::spmv_serial(a, x, y);
    }
    benchmark::DoNotOptimize(y.data());
  }
}

template <bool Omp>
void BM_WeightedSum(benchmark::State& state) {
  const std::size_t len = static_cast<std::size_t>(state.range(0));
  std::vector<std::vector<double>> aligned(4, std::vector<double>(len, 0.5));
  std::vector<double> w{0.1, 0.2, 0.3, 0.4}, out(len);
  for (auto _ : state) {
    if constexpr (Omp) {
      sgla::kernels::weighted_sum_omp(aligned, w, out);
    } else {
      sgla::kernels::weighted_sum_serial(aligned, w, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Omp>
void BM_CosineTopK(benchmark::State& state) {
  const auto n = static_cast<sgla::Index>(state.range(0));
  const auto x = random_unit_rows(n, 32);
  for (auto _ : state) {
    auto r = Omp ? sgla::kernels::cosine_topk_omp(x, n, 32, 10) : sgla::kernels::cosine_topk_serial(x, n, 32, 10);
    benchmark::DoNotOptimize(r.neighbors.data());
  }
}

}  // namespace

BENCHMARK(BM_Spmv<false>)->Arg(20000)->Arg(200000);
BENCHMARK(BM_Spmv<true>)->Arg(20000)->Arg(200000);
BENCHMARK(BM_WeightedSum<false>)->Arg(1 << 20);
BENCHMARK(BM_WeightedSum<true>)->Arg(1 << 20);
BENCHMARK(BM_CosineTopK<false>)->Arg(2000);
BENCHMARK(BM_CosineTopK<true>)->Arg(2000);

BENCHMARK_MAIN();
