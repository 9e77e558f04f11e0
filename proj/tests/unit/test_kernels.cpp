#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sgla/kernels.hpp"
#include "sgla/parallel.hpp"

namespace k = sgla::kernels;

TEST(Kernels, SpmvSerialMatchesDense) {
  std::mt19937_64 rng(7);
  const auto a = oracle::random_adjacency(80, 0.1, rng, 0.1, 2.0);
  const auto m = oracle::sparse(a);
  Eigen::VectorXd x = Eigen::VectorXd::Random(80);
  std::vector<double> y(80);
  k::spmv_serial(m, {x.data(), 80}, y);
  const Eigen::VectorXd want = a * x;
  for (int i = 0; i < 80; ++i) EXPECT_NEAR(y[i], want(i), 1e-13);
}

TEST(Kernels, SpmvParallelBitIdentical) {
  sgla::parallel::set_thread_count(4);
  std::mt19937_64 rng(8);
  const auto m = oracle::sparse(oracle::random_adjacency(600, 0.05, rng, 0.1, 2.0));
  std::vector<double> x(600);
  std::normal_distribution<double> g;
  for (auto& v : x) v = g(rng);
  std::vector<double> ys(600), yp(600);
  k::spmv_serial(m, x, ys);
  k::spmv_omp(m, x, yp);
  EXPECT_EQ(ys, yp);
  sgla::parallel::set_thread_count(0);
}

TEST(Kernels, WeightedSumParallelBitIdentical) {
  sgla::parallel::set_thread_count(4);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> aligned(5, std::vector<double>(100000));
  for (auto& v : aligned) {
    for (auto& x : v) x = g(rng);
  }
  const std::vector<double> w{0.1, 0.3, 0.05, 0.25, 0.3};
  std::vector<double> s(100000), p(100000);
  k::weighted_sum_serial(aligned, w, s);
  k::weighted_sum_omp(aligned, w, p);
  EXPECT_EQ(s, p);
  double want = 0.0;
  for (std::size_t i = 0; i < 5; ++i) want += w[i] * aligned[i][17];
  EXPECT_EQ(s[17], want);
  sgla::parallel::set_thread_count(0);
}

TEST(Kernels, CosineTopKParallelBitIdentical) {
  sgla::parallel::set_thread_count(4);
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g;
  const sgla::Index n = 700, d = 12;
  std::vector<double> x(n * d);
  for (sgla::Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (sgla::Index j = 0; j < d; ++j) {
      x[i * d + j] = g(rng);
      s += x[i * d + j] * x[i * d + j];
    }
    for (sgla::Index j = 0; j < d; ++j) x[i * d + j] /= std::sqrt(s);
  }
  const auto s = k::cosine_topk_serial(x, n, d, 7);
  const auto p = k::cosine_topk_omp(x, n, d, 7);
  EXPECT_EQ(s.neighbors, p.neighbors);
  EXPECT_EQ(s.sims, p.sims);
  sgla::parallel::set_thread_count(0);
}

TEST(Kernels, CosineTopKOrderAndTies) {
  // Rows 1, 2 and 3 are identical; row 0 is orthogonal to them.
  const std::vector<double> x{1, 0, 0, 1, 0, 1, 0, 1};
  const auto t = k::cosine_topk_serial(x, 4, 2, 2);
  EXPECT_EQ(t.neighbors[0], -1);  // nothing with positive similarity
  EXPECT_EQ(t.neighbors[1], -1);
  EXPECT_EQ(t.neighbors[2 * 1 + 0], 2);
  EXPECT_EQ(t.neighbors[2 * 1 + 1], 3);
  EXPECT_EQ(t.neighbors[2 * 3 + 0], 1);
  EXPECT_EQ(t.neighbors[2 * 3 + 1], 2);
  EXPECT_DOUBLE_EQ(t.sims[2 * 3 + 0], 1.0);
}

TEST(Parallel, SerialFlagRoundTrips) {
  sgla::parallel::set_thread_count(3);
  sgla::parallel::set_serial(true);
  EXPECT_TRUE(sgla::parallel::serial());
  EXPECT_EQ(sgla::parallel::thread_count(), 1);
  sgla::parallel::set_serial(false);
  EXPECT_FALSE(sgla::parallel::serial());
  EXPECT_EQ(sgla::parallel::thread_count(), 3);
  sgla::parallel::set_thread_count(0);
  EXPECT_GE(sgla::parallel::thread_count(), 1);
}
