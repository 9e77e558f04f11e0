#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sgla/views.hpp"

namespace sgla {

// A view sees the blocks in `informative` as separate communities and all
// remaining blocks as one merged community.
struct SbmGraphViewSpec {
  double p_in = 0.1;
  double p_out = 0.01;
  std::vector<int> informative;
};

// Attribute rows are the community mean plus N(0, noise^2) per coordinate.
// Community means are random unit-scale vectors.
struct SbmAttributeViewSpec {
  int dim = 16;
  double noise = 0.5;
  std::vector<int> informative;
  std::optional<int> knn_k;
};

struct SbmSpec {
  std::string name = "sbm";
  Index n = 0;
  Index k = 0;
  std::uint64_t seed = 1;
  std::vector<SbmGraphViewSpec> graph_views;
  std::vector<SbmAttributeViewSpec> attribute_views;

  // Throws InvalidArgument on out-of-range probabilities, bad block ids, or
  // when some pair of blocks is not separated by any view.
  void validate() const;
};

SbmSpec parse_sbm_spec(const std::string& json_text);

// Deterministic for a given spec. Node a belongs to block a * k / n.
// The result carries ground-truth labels.
MvagDataset generate_sbm(const SbmSpec& spec);

}  // namespace sgla
