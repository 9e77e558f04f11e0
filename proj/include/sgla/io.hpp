#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sgla/sparse.hpp"
#include "sgla/views.hpp"

namespace sgla::io {

namespace fs = std::filesystem;

// Reads a Matrix Market coordinate file (real, integer or pattern;
// symmetric or general) as a graph adjacency. General files are
// symmetrized by taking the larger of A[a,b] and A[b,a]; a symmetric file
// that stores both triangles with different values raises
// AsymmetryBeyondTolerance. Diagonal and zero entries are discarded.
GraphView read_graph_mtx(const fs::path& path);

// Reads a Matrix Market coordinate file as-is (used for Laplacians).
SparseSymMatrix read_sparse_mtx(const fs::path& path);

// Writes the lower triangle in "coordinate real symmetric" form with
// 17 significant digits, so a read-back is bit-identical.
void write_sparse_mtx(const fs::path& path, const SparseSymMatrix& m);

// Attribute matrix from a Matrix Market array file or a headerless CSV
// (chosen by the .mtx extension).
AttributeView read_attributes(const fs::path& path);
void write_attributes_mtx(const fs::path& path, const AttributeView& x);

std::vector<int> read_labels(const fs::path& path);
void write_labels(const fs::path& path, const std::vector<int>& labels);

// Writes `contents` to a temporary sibling and renames it into place.
void write_file_atomic(const fs::path& path, const std::string& contents);
std::string read_file(const fs::path& path);

struct AttributeEntry {
  std::string path;
  std::optional<int> knn_k;
};

struct DatasetManifest {
  std::string name;
  Index n = 0;
  Index k = 0;
  std::vector<std::string> graph_views;
  std::vector<AttributeEntry> attribute_views;
  std::optional<std::string> labels;
};

DatasetManifest read_manifest(const fs::path& path);
void write_manifest(const fs::path& path, const DatasetManifest& m);

// Loads every file named by the manifest; relative paths resolve against
// the manifest's directory.
MvagDataset load_dataset(const fs::path& manifest_path);

// Writes a dataset as <dir>/manifest.json plus one file per view.
void save_dataset(const fs::path& dir, const MvagDataset& ds);

// 17-significant-digit decimal, the exchange precision for every text output.
std::string format_double(double v);

}  // namespace sgla::io
