#pragma once

#include <span>
#include <vector>

namespace sgla {

struct ClusteringScores {
  double acc = 0.0;
  double f1 = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  double purity = 0.0;
};

// Minimum-cost perfect assignment for a square cost matrix (row-major);
// returns the column matched to each row.
std::vector<int> hungarian_min_cost(std::span<const double> cost, int size);

// Acc and macro-F1 use the Hungarian-optimal matching of predicted to true
// labels; NMI is normalized by the arithmetic mean of the two entropies.
// Throws LengthMismatch.
ClusteringScores clustering_metrics(std::span<const int> pred, std::span<const int> truth);

}  // namespace sgla
