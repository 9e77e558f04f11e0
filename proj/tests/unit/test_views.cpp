#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sgla/errors.hpp"
#include "sgla/views.hpp"

namespace {

sgla::AttributeView rows(sgla::Index n, sgla::Index d, std::vector<double> v) {
  sgla::AttributeView x;
  x.n = n;
  x.d = d;
  x.values = std::move(v);
  return x;
}

}  // namespace

TEST(NormalizedLaplacian, TriangleK3) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Ones(3, 3);
  a.diagonal().setZero();
  const auto l = oracle::dense(sgla::normalized_laplacian(oracle::graph(a)).matrix);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(l(i, j), i == j ? 1.0 : -0.5, 1e-15);
  }
  const auto ev = oracle::eigenvalues(l);
  EXPECT_NEAR(ev(0), 0.0, 1e-12);
  EXPECT_NEAR(ev(1), 1.5, 1e-12);
  EXPECT_NEAR(ev(2), 1.5, 1e-12);
}

TEST(NormalizedLaplacian, SingleEdge) {
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, 1, 0;
  const auto l = oracle::dense(sgla::normalized_laplacian(oracle::graph(a)).matrix);
  Eigen::MatrixXd want(2, 2);
  want << 1, -1, -1, 1;
  EXPECT_EQ(l, want);
}

TEST(NormalizedLaplacian, IsolatedNodeGetsUnitDiagonal) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) a(i, j) = i == j ? 0.0 : 1.0;
  }
  const auto l = oracle::dense(sgla::normalized_laplacian(oracle::graph(a)).matrix);
  EXPECT_EQ(l(3, 3), 1.0);
  EXPECT_EQ(l.row(3).sum(), 1.0);
  EXPECT_LE((l.topLeftCorner(3, 3) - oracle::normalized_laplacian(a.topLeftCorner(3, 3))).cwiseAbs().maxCoeff(),
            1e-15);
}

TEST(NormalizedLaplacian, MatchesDenseOracleAndBounds) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = oracle::random_adjacency(30, 0.15, rng, 0.1, 5.0);
    const auto l = sgla::normalized_laplacian(oracle::graph(a));
    const auto d = oracle::dense(l.matrix);
    EXPECT_LE((d - oracle::normalized_laplacian(a)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_EQ(d, d.transpose());
    const auto ev = oracle::eigenvalues(d);
    EXPECT_GE(ev.minCoeff(), -1e-12);
    EXPECT_LE(ev.maxCoeff(), 2.0 + 1e-12);
    for (int v = 0; v < 5; ++v) {
      Eigen::VectorXd x = Eigen::VectorXd::Random(30).normalized();
      const double q = x.dot(d * x);
      EXPECT_GE(q, -1e-12);
      EXPECT_LE(q, 2.0 + 1e-12);
    }
  }
}

TEST(NormalizedLaplacian, EqualWeightsMatchUnweighted) {
  std::mt19937_64 rng(22);
  const auto a = oracle::random_connected_adjacency(20, 0.2, rng);
  const auto l1 = oracle::dense(sgla::normalized_laplacian(oracle::graph(a)).matrix);
  const auto l3 = oracle::dense(sgla::normalized_laplacian(oracle::graph(3.0 * a)).matrix);
  EXPECT_LE((l1 - l3).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(GraphView, ValidateRejectsBadWeights) {
  sgla::GraphView g{sgla::SparseSymMatrix::from_triplets(2, {{0, 1, -1.0}, {1, 0, -1.0}})};
  EXPECT_THROW(g.validate(), sgla::InvalidArgument);
  sgla::GraphView loop{sgla::SparseSymMatrix::from_triplets(2, {{0, 0, 1.0}})};
  EXPECT_THROW(loop.validate(), sgla::InvalidArgument);
}

TEST(KnnGraph, IdenticalRowsTieBreakLowestIndex) {
  const auto x = rows(3, 2, {1, 2, 1, 2, 1, 2});
  const auto g = sgla::knn_graph(x, 1).graph.adjacency;
  // Rows 1 and 2 both pick node 0; node 0 picks node 1.
  EXPECT_TRUE(g.has_entry(0, 1));
  EXPECT_TRUE(g.has_entry(0, 2));
  EXPECT_FALSE(g.has_entry(1, 2));
  EXPECT_NEAR(g.at(0, 1), 1.0, 1e-15);

  const auto tri = sgla::knn_graph(x, 2).graph.adjacency;
  EXPECT_EQ(tri.nnz(), 6);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (a != b) EXPECT_NEAR(tri.at(a, b), 1.0, 1e-15);
    }
  }
}

TEST(KnnGraph, OrthogonalRowsGiveEmptyGraph) {
  const auto x = rows(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  const auto g = sgla::knn_graph(x, 1);
  EXPECT_EQ(g.graph.adjacency.nnz(), 0);
  EXPECT_EQ(g.zero_norm_rows, 0u);
}

TEST(KnnGraph, TwoPairs) {
  const auto x = rows(4, 2, {1, 0, 1, 0.1, 0, 1, 0.1, 1});
  const auto g = sgla::knn_graph(x, 1).graph.adjacency;
  EXPECT_EQ(g.nnz(), 4);
  const double c = 1.0 / std::sqrt(1.01);  // cos([1,0],[1,0.1])
  EXPECT_NEAR(g.at(0, 1), c, 1e-15);
  EXPECT_NEAR(g.at(2, 3), c, 1e-15);
  EXPECT_EQ(g.at(0, 1), g.at(1, 0));
}

TEST(KnnGraph, ZeroNormRowIsIsolated) {
  const auto x = rows(4, 2, {1, 0, 0, 0, 1, 0.2, 0.9, 0.1});
  const auto g = sgla::knn_graph(x, 2);
  EXPECT_EQ(g.zero_norm_rows, 1u);
  EXPECT_EQ(g.graph.adjacency.row_cols(1).size(), 0u);
}

TEST(KnnGraph, NegativeSimilarityDropped) {
  const auto x = rows(2, 1, {1, -1});
  EXPECT_EQ(sgla::knn_graph(x, 1).graph.adjacency.nnz(), 0);
}

TEST(KnnGraph, MatchesBruteForceAndIsDeterministic) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  const sgla::Index n = 60, d = 5, k = 4;
  std::vector<double> v(n * d);
  for (auto& e : v) e = g(rng);
  const auto x = rows(n, d, v);
  const auto a = sgla::knn_graph(x, k).graph.adjacency;
  EXPECT_EQ(a, sgla::knn_graph(x, k).graph.adjacency);

  auto cosine = [&](int i, int j) {
    double dot = 0, ni = 0, nj = 0;
    for (int f = 0; f < d; ++f) {
      dot += v[i * d + f] * v[j * d + f];
      ni += v[i * d + f] * v[i * d + f];
      nj += v[j * d + f] * v[j * d + f];
    }
    return dot / std::sqrt(ni * nj);
  };
  Eigen::MatrixXd want = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> cand;
    for (int j = 0; j < n; ++j) {
      if (j != i) cand.push_back({-cosine(i, j), j});
    }
    std::sort(cand.begin(), cand.end());
    for (int t = 0; t < k; ++t) {
      const double s = -cand[t].first;
      if (s > 0) want(i, cand[t].second) = want(cand[t].second, i) = s;
    }
  }
  const auto got = oracle::dense(a);
  EXPECT_LE((got - want).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ((got.array() != 0).count(), (want.array() != 0).count());
}

TEST(KnnGraph, RejectsBadK) {
  const auto x = rows(3, 1, {1, 2, 3});
  EXPECT_THROW(sgla::knn_graph(x, 0), sgla::InvalidArgument);
  EXPECT_THROW(sgla::knn_graph(x, 3), sgla::InvalidArgument);
}

TEST(BuildViewLaplacians, OrderAndOverrides) {
  std::mt19937_64 rng(24);
  sgla::MvagDataset ds;
  ds.n = 12;
  ds.k = 2;
  const auto a0 = oracle::random_adjacency(12, 0.3, rng);
  const auto a1 = oracle::random_adjacency(12, 0.3, rng);
  ds.graph_views = {oracle::graph(a0), oracle::graph(a1)};
  std::normal_distribution<double> g;
  for (int i = 0; i < 2; ++i) {
    std::vector<double> v(12 * 3);
    for (auto& e : v) e = g(rng);
    ds.attribute_views.push_back(rows(12, 3, v));
  }
  ds.attribute_views[1].knn_k = 5;
  const auto views = sgla::build_view_laplacians(ds, 2);
  ASSERT_EQ(views.size(), 4u);
  EXPECT_EQ(views[0].source.kind, sgla::ViewSource::Kind::graph);
  EXPECT_EQ(views[1].source.index, 1u);
  EXPECT_EQ(views[2].source.kind, sgla::ViewSource::Kind::attribute);
  EXPECT_EQ(views[3].source.index, 1u);
  EXPECT_EQ(views[0].matrix, sgla::normalized_laplacian(ds.graph_views[0]).matrix);
  EXPECT_EQ(views[2].matrix, sgla::normalized_laplacian(sgla::knn_graph(ds.attribute_views[0], 2).graph).matrix);
  EXPECT_EQ(views[3].matrix, sgla::normalized_laplacian(sgla::knn_graph(ds.attribute_views[1], 5).graph).matrix);
}

TEST(BuildViewLaplacians, SingleAndDuplicatedViews) {
  std::mt19937_64 rng(25);
  sgla::MvagDataset ds;
  ds.n = 10;
  ds.k = 2;
  const auto a = oracle::random_adjacency(10, 0.3, rng, 0.3, 2.0);
  ds.graph_views = {oracle::graph(a)};
  auto one = sgla::build_view_laplacians(ds, 3);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].matrix, sgla::normalized_laplacian(ds.graph_views[0]).matrix);
  ds.graph_views.push_back(ds.graph_views[0]);
  auto two = sgla::build_view_laplacians(ds, 3);
  EXPECT_EQ(two[0].matrix, two[1].matrix);
}

TEST(BuildViewLaplacians, DimensionMismatch) {
  std::mt19937_64 rng(26);
  sgla::MvagDataset ds;
  ds.n = 10;
  ds.k = 2;
  ds.graph_views = {oracle::graph(oracle::random_adjacency(10, 0.3, rng)),
                    oracle::graph(oracle::random_adjacency(9, 0.3, rng))};
  EXPECT_THROW(sgla::build_view_laplacians(ds, 3), sgla::DimensionMismatch);
}
