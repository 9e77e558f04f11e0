#include "sgla/views.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sgla/errors.hpp"
#include "sgla/kernels.hpp"

namespace sgla {

void GraphView::validate() const {
  for (Index r = 0; r < adjacency.size(); ++r) {
    auto cols = adjacency.row_cols(r);
    auto vals = adjacency.row_values(r);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (cols[i] == r) throw InvalidArgument("graph view has a self loop at node " + std::to_string(r));
      if (!(vals[i] > 0.0) || !std::isfinite(vals[i])) {
        throw InvalidArgument("graph view has a non-positive weight at node " + std::to_string(r));
      }
    }
  }
}

void AttributeView::validate() const {
  if (n < 0 || d < 0 || values.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(d)) {
    throw DimensionMismatch("attribute view shape does not match its value count");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("attribute view has a non-finite entry");
  }
  if (knn_k && *knn_k < 1) throw InvalidArgument("attribute view knn_k must be >= 1");
}

void MvagDataset::validate() const {
  for (std::size_t i = 0; i < graph_views.size(); ++i) {
    if (graph_views[i].size() != n) {
      throw DimensionMismatch("graph view " + std::to_string(i) + " has " +
                              std::to_string(graph_views[i].size()) + " nodes, expected " +
                              std::to_string(n));
    }
  }
  for (std::size_t i = 0; i < attribute_views.size(); ++i) {
    if (attribute_views[i].n != n) {
      throw DimensionMismatch("attribute view " + std::to_string(i) + " has " +
                              std::to_string(attribute_views[i].n) + " rows, expected " +
                              std::to_string(n));
    }
  }
  if (labels && labels->size() != static_cast<std::size_t>(n)) {
    throw DimensionMismatch("label count " + std::to_string(labels->size()) + " differs from n=" +
                            std::to_string(n));
  }
}

ViewLaplacian normalized_laplacian(const GraphView& g) {
  const SparseSymMatrix& a = g.adjacency;
  const Index n = a.size();
  std::vector<double> dinv(static_cast<std::size_t>(n), 0.0);
  for (Index r = 0; r < n; ++r) {
    double deg = 0.0;
    for (double v : a.row_values(r)) deg += v;
    dinv[r] = deg > 0.0 ? 1.0 / std::sqrt(deg) : 0.0;
  }

  std::vector<std::int64_t> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Index> col;
  std::vector<double> val;
  col.reserve(static_cast<std::size_t>(a.nnz() + n));
  val.reserve(col.capacity());
  for (Index r = 0; r < n; ++r) {
    auto cols = a.row_cols(r);
    auto vals = a.row_values(r);
    bool diag_done = false;
    for (std::size_t i = 0; i <= cols.size(); ++i) {
      if (!diag_done && (i == cols.size() || cols[i] > r)) {
        col.push_back(r);
        val.push_back(1.0);
        diag_done = true;
      }
      if (i == cols.size()) break;
      const Index c = cols[i];
      // Same operand order for (r,c) and (c,r) keeps the result bit-symmetric.
      const double scale = dinv[std::min(r, c)] * dinv[std::max(r, c)];
      col.push_back(c);
      val.push_back(-(vals[i] * scale));
    }
    row_ptr[r + 1] = static_cast<std::int64_t>(col.size());
  }
  return {SparseSymMatrix(n, std::move(row_ptr), std::move(col), std::move(val)), {}};
}

KnnGraph knn_graph(const AttributeView& x, Index k) {
  x.validate();
  const Index n = x.n;
  if (k < 1 || k >= n) {
    throw InvalidArgument("knn_graph needs 1 <= K < n (K=" + std::to_string(k) +
                          ", n=" + std::to_string(n) + ")");
  }
  const Index d = x.d;
  std::vector<double> unit(x.values);
  std::size_t zero_rows = 0;
  for (Index r = 0; r < n; ++r) {
    double* row = unit.data() + static_cast<std::size_t>(r) * d;
    double sq = 0.0;
    for (Index j = 0; j < d; ++j) sq += row[j] * row[j];
    if (sq == 0.0) {
      ++zero_rows;
      continue;
    }
    const double inv = 1.0 / std::sqrt(sq);
    for (Index j = 0; j < d; ++j) row[j] *= inv;
  }

  const kernels::TopK top = kernels::cosine_topk(unit, n, d, k);

  // Union of directed lists; both directions see the same similarity value.
  std::vector<Triplet> entries;
  entries.reserve(top.neighbors.size() * 2);
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
  for (Index a = 0; a < n; ++a) {
    for (Index i = 0; i < k; ++i) {
      const std::size_t slot = static_cast<std::size_t>(a) * k + i;
      const Index b = top.neighbors[slot];
      if (b < 0) continue;
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  }
  for (Index a = 0; a < n; ++a) {
    auto& list = adj[a];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  // Recompute each weight from the lower index so (a,b) and (b,a) agree bitwise.
  for (Index a = 0; a < n; ++a) {
    for (Index b : adj[a]) {
      const Index lo = std::min(a, b);
      const Index hi = std::max(a, b);
      const double* xl = unit.data() + static_cast<std::size_t>(lo) * d;
      const double* xh = unit.data() + static_cast<std::size_t>(hi) * d;
      double s = 0.0;
      for (Index j = 0; j < d; ++j) s += xl[j] * xh[j];
      entries.push_back({a, b, s});
    }
  }
  KnnGraph out;
  out.graph.adjacency = SparseSymMatrix::from_triplets(n, std::move(entries));
  out.zero_norm_rows = zero_rows;
  return out;
}

std::vector<ViewLaplacian> build_view_laplacians(const MvagDataset& ds, Index k) {
  ds.validate();
  std::vector<ViewLaplacian> out;
  out.reserve(ds.view_count());
  for (std::size_t i = 0; i < ds.graph_views.size(); ++i) {
    ViewLaplacian l = normalized_laplacian(ds.graph_views[i]);
    l.source = {ViewSource::Kind::graph, i};
    out.push_back(std::move(l));
  }
  for (std::size_t i = 0; i < ds.attribute_views.size(); ++i) {
    const auto& x = ds.attribute_views[i];
    ViewLaplacian l = normalized_laplacian(knn_graph(x, x.knn_k.value_or(k)).graph);
    l.source = {ViewSource::Kind::attribute, i};
    out.push_back(std::move(l));
  }
  return out;
}

}  // namespace sgla
