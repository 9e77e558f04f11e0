#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sgla/sparse.hpp"

namespace sgla {

// Simple weighted graph: symmetric adjacency, positive weights, no self loops.
struct GraphView {
  SparseSymMatrix adjacency;

  Index size() const { return adjacency.size(); }
  // Throws InvalidArgument when weights are non-positive or a diagonal entry is stored.
  void validate() const;
};

// Dense n x d attribute matrix, row-major.
struct AttributeView {
  Index n = 0;
  Index d = 0;
  std::vector<double> values;
  // Per-view KNN override; the dataset-wide K is used when empty.
  std::optional<Index> knn_k;

  double at(Index row, Index col) const { return values[static_cast<std::size_t>(row) * d + col]; }
  void validate() const;
};

struct ViewSource {
  enum class Kind { graph, attribute };
  Kind kind = Kind::graph;
  std::size_t index = 0;  // position within its own kind
};

struct ViewLaplacian {
  SparseSymMatrix matrix;
  ViewSource source;

  Index size() const { return matrix.size(); }
};

struct MvagDataset {
  std::string name;
  Index n = 0;
  Index k = 0;
  std::vector<GraphView> graph_views;
  std::vector<AttributeView> attribute_views;
  std::optional<std::vector<int>> labels;

  std::size_t view_count() const { return graph_views.size() + attribute_views.size(); }
  // Throws DimensionMismatch if any view or the label vector disagrees with n.
  void validate() const;
};

// I - D^{-1/2} A D^{-1/2}; isolated nodes get diagonal 1 (D^{-1/2} taken as 0).
ViewLaplacian normalized_laplacian(const GraphView& g);

struct KnnGraph {
  GraphView graph;
  std::size_t zero_norm_rows = 0;
};

// Cosine-similarity KNN graph, symmetrized by union. Edges with similarity
// <= 0 are dropped; zero-norm rows end up isolated and are counted.
KnnGraph knn_graph(const AttributeView& x, Index k);

// One Laplacian per view in order [graph views..., attribute views...].
std::vector<ViewLaplacian> build_view_laplacians(const MvagDataset& ds, Index k);

}  // namespace sgla
